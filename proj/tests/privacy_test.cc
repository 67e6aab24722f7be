/*
 * Copyright 2026 The dp-ocp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dpocp/errors.h"
#include "dpocp/privacy.h"
#include "support/golden.h"
#include "support/oracles.h"

namespace dpocp {
namespace {

std::vector<LossFunction> RandomQuadratics(Rng& rng, int d, int horizon,
                                           double alpha = 1.0) {
  std::vector<LossFunction> losses;
  for (int t = 0; t < horizon; ++t) {
    Vector v = GaussianVector(rng, d, 1.0);
    v /= std::max(1.0, v.norm());
    losses.push_back(LossFunction::Quadratic(
        std::uniform_real_distribution<double>(-1, 1)(rng), v, alpha));
  }
  return losses;
}

TEST(CalibrateTest, GoldenValues) {
  const NoiseCalibration cal = Calibrate({1.0, 0.1, 16}, 1.0);
  EXPECT_NEAR(cal.c, golden::kGoldenC, 1e-14);
  EXPECT_NEAR(cal.beta, golden::kGoldenBeta, 1e-12);
  EXPECT_NEAR(cal.c, 0.072864, 1e-5);
  EXPECT_NEAR(cal.beta, 15.9077, 1e-3);
  EXPECT_DOUBLE_EQ(cal.NoiseStd(4), cal.beta / 4);
}

TEST(CalibrateTest, LinearInLambda) {
  const NoiseCalibration a = Calibrate({1.0, 0.1, 16}, 1.0);
  const NoiseCalibration b = Calibrate({1.0, 0.1, 16}, 2.0);
  EXPECT_DOUBLE_EQ(b.beta, 2.0 * a.beta);
  EXPECT_DOUBLE_EQ(b.c, a.c);
}

TEST(CalibrateTest, RejectsOutOfRangeBudget) {
  EXPECT_THROW(Calibrate({1.0, 0.5, 16}, 1.0), ValidationError);
  EXPECT_THROW(Calibrate({1.0, 2 * std::exp(-2.0), 16}, 1.0),
               ValidationError);
  EXPECT_THROW(Calibrate({0.0, 0.1, 16}, 1.0), ValidationError);
  EXPECT_THROW(Calibrate({1.0, 0.0, 16}, 1.0), ValidationError);
  EXPECT_THROW(Calibrate({1.0, 0.1, 1}, 1.0), ValidationError);
  EXPECT_THROW(Calibrate({1.0, 0.1, 16}, 0.0), ValidationError);
  EXPECT_NO_THROW(Calibrate({1.0, 0.27, 16}, 1.0));
}

// Extended-precision reimplementation over a parameter grid.
TEST(CalibrateTest, MatchesLongDoubleReference) {
  for (double eps : {0.01, 0.1, 1.0, 10.0}) {
    for (double delta : {1e-6, 1e-3, 0.1, 0.25}) {
      for (int T : {2, 16, 1000, 1 << 20}) {
        const NoiseCalibration cal = Calibrate({eps, delta, T}, 3.0);
        const double c = static_cast<double>(oracle::CalibrationC(T, delta));
        const double beta =
            static_cast<double>(oracle::CalibrationBeta(3.0, T, eps, delta));
        EXPECT_NEAR(cal.c, c, 1e-13 * std::abs(c));
        EXPECT_NEAR(cal.beta, beta, 1e-12 * beta);
        EXPECT_GT(cal.c, 0.0);
      }
    }
  }
}

TEST(CalibrateTest, BetaMonotonicity) {
  const std::vector<double> epss = {0.01, 0.1, 0.5, 1.0, 4.0, 20.0};
  const std::vector<double> deltas = {0.2, 0.1, 1e-2, 1e-4, 1e-8};
  const std::vector<int> horizons = {4, 16, 256, 4096, 1 << 16};
  for (int T : horizons) {
    for (double delta : deltas) {
      for (std::size_t i = 1; i < epss.size(); ++i) {
        EXPECT_LT(Calibrate({epss[i], delta, T}, 1).beta,
                  Calibrate({epss[i - 1], delta, T}, 1).beta);
      }
    }
  }
  for (double eps : epss) {
    for (double delta : deltas) {
      for (std::size_t i = 1; i < horizons.size(); ++i) {
        EXPECT_GT(Calibrate({eps, delta, horizons[i]}, 1).beta,
                  Calibrate({eps, delta, horizons[i - 1]}, 1).beta);
      }
    }
    for (int T : horizons) {
      for (std::size_t i = 1; i < deltas.size(); ++i) {
        EXPECT_GT(Calibrate({eps, deltas[i], T}, 1).beta,
                  Calibrate({eps, deltas[i - 1], T}, 1).beta);
      }
    }
  }
}

TEST(SensitivityProfileTest, Presets) {
  EXPECT_DOUBLE_EQ(SensitivityProfile::Igd(3.0, 1.0).lambda, 6.0);
  EXPECT_DOUBLE_EQ(SensitivityProfile::Giga(3.0, 2.0).lambda, 6.0);
  EXPECT_DOUBLE_EQ(SensitivityProfile::Ftl(3.0, 2.0).lambda, 3.0);
  // Below alpha = 1 the IGD and GIGA scales widen by 1/alpha.
  EXPECT_DOUBLE_EQ(SensitivityProfile::Igd(3.0, 0.5).lambda, 12.0);
  EXPECT_DOUBLE_EQ(SensitivityProfile::Giga(3.0, 0.25).lambda, 24.0);
  LossConstants k;
  k.alpha = 1.0;
  k.lipschitz = 2.0;
  k.grad_bound = 2.5;
  EXPECT_DOUBLE_EQ(SensitivityProfile::For(LearnerKind::kGiga, k).lambda, 5.0);
  EXPECT_THROW(SensitivityProfile::For(LearnerKind::kQftl, k),
               ValidationError);
}

// IGD with alpha < 1: the widened scale is needed. Neighbor gaps on random
// pairs stay under 2L/(alpha t).
TEST(SensitivityProfileTest, SmallAlphaIgdStaysUnderWidenedScale) {
  Rng rng = MakeRng(81);
  const double alpha = 0.1;
  const ConvexSet set = ConvexSet::L2Ball(2, 1.0);
  double worst_plain = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LossFunction> a = RandomQuadratics(rng, 2, 32, alpha);
    std::vector<LossFunction> b = a;
    b[trial % 4] = RandomQuadratics(rng, 2, 1, alpha)[0];
    std::vector<LossFunction> both = a;
    both.push_back(b[trial % 4]);
    const LossConstants k = DeriveConstants(both, set);
    IgdLearner la(set, alpha, Vector::Zero(2));
    IgdLearner lb(set, alpha, Vector::Zero(2));
    for (int t = 1; t <= 32; ++t) {
      const double gap = (la.Update(a[t - 1]) - lb.Update(b[t - 1])).norm();
      EXPECT_LE(gap, SensitivityProfile::Igd(k.lipschitz, alpha).lambda / t +
                         1e-7);
      worst_plain = std::max(worst_plain, t * gap / (2 * k.lipschitz));
    }
  }
  // The unwidened 2L scale would have been exceeded.
  EXPECT_GT(worst_plain, 1.0);
}

TEST(PrivateLearnerTest, ZeroBetaReproducesNonPrivateTrace) {
  Rng rng = MakeRng(91);
  const ConvexSet set = ConvexSet::L2Ball(3, 2.0);
  const std::vector<LossFunction> losses = RandomQuadratics(rng, 3, 4);
  const LossConstants k = DeriveConstants(losses, set);
  PrivateRunOptions options;
  options.beta_override = 0.0;
  for (LearnerKind kind :
       {LearnerKind::kIgd, LearnerKind::kGiga, LearnerKind::kFtl}) {
    const PrivateRunResult run =
        RunPrivate(kind, losses, set, {1.0, 0.01, 4}, k, 5, options);
    ASSERT_EQ(run.trace.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(run.trace.cost_private()[i], run.trace.cost_nonprivate()[i]);
      EXPECT_EQ(run.trace.noise_norm()[i], 0.0);
    }
    EXPECT_EQ(run.trace.FinalRegretPrivate(),
              run.trace.FinalRegretNonPrivate());
  }
}

TEST(PrivateLearnerTest, SameSeedSameOutput) {
  Rng rng = MakeRng(92);
  const ConvexSet set = ConvexSet::L2Ball(2, 1.0);
  const std::vector<LossFunction> losses = RandomQuadratics(rng, 2, 50);
  const LossConstants k = DeriveConstants(losses, set);
  const auto a = RunPrivate(LearnerKind::kIgd, losses, set, {1, 0.01, 50}, k,
                            17);
  const auto b = RunPrivate(LearnerKind::kIgd, losses, set, {1, 0.01, 50}, k,
                            17);
  const auto c = RunPrivate(LearnerKind::kIgd, losses, set, {1, 0.01, 50}, k,
                            18);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace.plays()[i], b.trace.plays()[i]);
    differs = differs || a.trace.plays()[i] != c.trace.plays()[i];
  }
  EXPECT_TRUE(differs);
}

TEST(PrivateLearnerTest, OutputsAreFeasibleAndCleanIterateIsKept) {
  Rng rng = MakeRng(93);
  const ConvexSet set = ConvexSet::L2Ball(3, 1.0);
  const std::vector<LossFunction> losses = RandomQuadratics(rng, 3, 64);
  const LossConstants k = DeriveConstants(losses, set);
  // Noisy and noiseless wrappers share the clean trajectory.
  auto noisy = std::make_unique<IgdLearner>(set, 1.0, Vector::Zero(3));
  auto quiet = std::make_unique<IgdLearner>(set, 1.0, Vector::Zero(3));
  PrivateLearner p(std::move(noisy), Calibrate({1, 0.01, 64}, 2 * k.lipschitz),
                   MakeRng(1));
  PrivateLearner q(std::move(quiet), NoiseCalibration{}, MakeRng(1));
  for (const LossFunction& f : losses) {
    const Vector& out = p.Step(f);
    q.Step(f);
    EXPECT_TRUE(set.Contains(out, 0.0));
    EXPECT_EQ(p.learner().current(), q.learner().current());
  }
}

TEST(PrivateLearnerTest, RequiresBoundedSet) {
  EXPECT_THROW(
      PrivateLearner(std::make_unique<IgdLearner>(ConvexSet::AllSpace(2), 1.0,
                                                  Vector::Zero(2)),
                     NoiseCalibration{}, MakeRng(1)),
      ValidationError);
  Rng rng = MakeRng(94);
  const std::vector<LossFunction> losses = RandomQuadratics(rng, 2, 4);
  LossConstants k;
  k.alpha = 1.0;
  k.lipschitz = k.grad_bound = 5.0;
  EXPECT_THROW(RunPrivate(LearnerKind::kIgd, losses, ConvexSet::AllSpace(2),
                          {1, 0.01, 4}, k, 1),
               ValidationError);
}

TEST(PrivateLearnerTest, RejectsUnderstatedConstants) {
  Rng rng = MakeRng(95);
  const ConvexSet set = ConvexSet::L2Ball(2, 1.0);
  const std::vector<LossFunction> losses = RandomQuadratics(rng, 2, 16);
  LossConstants k = DeriveConstants(losses, set);
  k.grad_bound *= 0.3;
  EXPECT_THROW(
      RunPrivate(LearnerKind::kGiga, losses, set, {1, 0.01, 16}, k, 1),
      ValidationError);
  LossConstants ok = DeriveConstants(losses, set);
  EXPECT_THROW(
      RunPrivate(LearnerKind::kIgd, losses, set, {1, 0.01, 15}, ok, 1),
      ValidationError);
}

// Per-coordinate std of the step-t noise over 1e5 draws within 1% of
// beta/t, and mean |b_t| within 2% of the Chi mean.
TEST(PrivateLearnerTest, NoiseMatchesCalibratedGaussian) {
  const int d = 2;
  const ConvexSet set = ConvexSet::L2Ball(d, 1e9);
  const NoiseCalibration cal = Calibrate({1.0, 0.1, 16}, 1.0);
  auto inner = std::make_unique<IgdLearner>(set, 1.0, Vector::Zero(d));
  const LossFunction zero = LossFunction::Quadratic(0.0, Vector::Ones(d), 1.0);
  for (int t : {1, 10}) {
    double sum_sq = 0.0, sum_norm = 0.0;
    const int draws = 100000;
    PrivateLearner base(inner->Clone(), cal, MakeRng(7, t));
    for (int i = 1; i < t; ++i) base.Step(zero);
    // Independent wrappers at the same clean state, one draw each.
    for (int i = 0; i < draws; ++i) {
      PrivateLearner p(base.learner().Clone(), cal, MakeRng(1000 + t, i));
      p.Step(zero);
      const Vector& b = p.last_noise();
      sum_sq += b.squaredNorm();
      sum_norm += b.norm();
    }
    const double expected = cal.beta / t;
    EXPECT_NEAR(std::sqrt(sum_sq / (draws * d)), expected, 0.01 * expected);
    EXPECT_NEAR(sum_norm / draws, oracle::ChiMean(d, expected),
                0.02 * oracle::ChiMean(d, expected));
  }
}

TEST(PrivateLearnerTest, NoiseIsFreshEachRound) {
  const int d = 1;
  const ConvexSet set = ConvexSet::L2Ball(d, 1e12);
  PrivateLearner p(std::make_unique<IgdLearner>(set, 1.0, Vector::Zero(d)),
                   NoiseCalibration{0.0, 1.0, 1.0}, MakeRng(3));
  const LossFunction zero = LossFunction::Quadratic(0.0, Vector::Ones(d), 1.0);
  const int n = 100000;
  std::vector<double> z;
  z.reserve(n);
  for (int t = 1; t <= n; ++t) {
    p.Step(zero);
    z.push_back(p.last_noise()[0] * t);  // standardized
  }
  double num = 0, den = 0;
  for (int i = 0; i + 1 < n; ++i) {
    num += z[i] * z[i + 1];
    den += z[i] * z[i];
  }
  EXPECT_LT(std::abs(num / den), 0.01);
}

// Two neighboring streams run with the same noise draws: the published
// points differ by at most 2 * 2L/(t-1) for t >= 2.
TEST(PrivateLearnerTest, SharedNoiseNeighborGap) {
  Rng rng = MakeRng(96);
  const ConvexSet set = ConvexSet::L2Ball(3, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int horizon = 32;
    std::vector<LossFunction> a = RandomQuadratics(rng, 3, horizon);
    std::vector<LossFunction> b = a;
    const int tau = trial % horizon;
    b[tau] = RandomQuadratics(rng, 3, 1)[0];
    std::vector<LossFunction> both = a;
    both.push_back(b[tau]);
    const LossConstants k = DeriveConstants(both, set);
    PrivateRunOptions options;
    options.validate_constants = false;
    options.compute_comparator = false;
    const auto ra = RunPrivate(LearnerKind::kIgd, a, set, {1, 0.01, horizon},
                               k, 100 + trial, options);
    const auto rb = RunPrivate(LearnerKind::kIgd, b, set, {1, 0.01, horizon},
                               k, 100 + trial, options);
    for (int t = 2; t <= horizon; ++t) {
      EXPECT_LE((ra.trace.plays()[t - 1] - rb.trace.plays()[t - 1]).norm(),
                2 * 2 * k.lipschitz / (t - 1) + 1e-9);
    }
  }
}

TEST(PrivateLearnerTest, GigaBurnInPlaysAreNoiseFree) {
  Rng rng = MakeRng(97);
  const ConvexSet set = ConvexSet::L2Ball(2, 1.0);
  const std::vector<LossFunction> losses = RandomQuadratics(rng, 2, 40);
  const LossConstants k = DeriveConstants(losses, set);
  const auto run =
      RunPrivate(LearnerKind::kGiga, losses, set, {1, 0.01, 40}, k, 3);
  ASSERT_GT(run.burn_in, 1);
  for (int t = 1; t <= run.burn_in; ++t) {
    EXPECT_EQ(run.trace.plays()[t - 1], run.trace.plays()[0]);
    EXPECT_EQ(run.trace.noise_norm()[t - 1], 0.0);
  }
  EXPECT_GT(run.trace.noise_norm()[run.burn_in], 0.0);
}

}  // namespace
}  // namespace dpocp
