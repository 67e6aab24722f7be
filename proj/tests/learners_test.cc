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
#include "dpocp/learners.h"
#include "dpocp/privacy.h"
#include "dpocp/solver.h"
#include "support/oracles.h"

namespace dpocp {
namespace {

Vector S(double x) { return Vector::Constant(1, x); }

LossFunction HalfSquare(double y) {  // 0.5 (y - x)^2
  return LossFunction::Quadratic(y, S(1.0), 0.0);
}

TEST(StepSizeTest, Rules) {
  EXPECT_DOUBLE_EQ(StepSize(LearnerKind::kIgd, 2.0, 5), 0.1);
  EXPECT_DOUBLE_EQ(StepSize(LearnerKind::kGiga, 2.0, 5), 0.2);
  EXPECT_GT(StepSize(LearnerKind::kIgd, 1.0, 3),
            StepSize(LearnerKind::kIgd, 1.0, 4));
  EXPECT_THROW(StepSize(LearnerKind::kFtl, 1.0, 1), ValidationError);
  EXPECT_THROW(StepSize(LearnerKind::kIgd, 0.0, 1), ValidationError);
  EXPECT_THROW(StepSize(LearnerKind::kIgd, 1.0, 0), ValidationError);
}

TEST(StepSizeTest, GigaBurnIn) {
  EXPECT_EQ(GigaBurnIn(2.0, 1.0), 8);
  EXPECT_EQ(GigaBurnIn(1.0, 2.0), 1);
  EXPECT_EQ(GigaBurnIn(1.5, 1.0), 5);  // ceil(4.5)
}

// x_t = 0, f = 0.5 (1 - x)^2, eta = 1 on R: 0.5.
TEST(IgdUpdateTest, UnconstrainedMatchesOracle) {
  const double oracle = oracle::ScalarMinimize(
      [](double x) { return 0.5 * x * x + 0.5 * (1 - x) * (1 - x); }, -2, 2);
  const Vector x = IgdUpdate(S(0), HalfSquare(1.0), 1.0, ConvexSet::AllSpace(1));
  EXPECT_NEAR(x[0], 0.5, 1e-12);
  EXPECT_NEAR(x[0], oracle, 1e-6);
}

// Same problem on [0, 0.3]: the boundary 0.3.
TEST(IgdUpdateTest, BoxBoundaryMatchesOracle) {
  const ConvexSet box = ConvexSet::Box(S(0.0), S(0.3));
  const double oracle = oracle::ScalarMinimize(
      [](double x) { return 0.5 * x * x + 0.5 * (1 - x) * (1 - x); }, 0, 0.3);
  const Vector x = IgdUpdate(S(0), HalfSquare(1.0), 1.0, box);
  EXPECT_NEAR(x[0], 0.3, 1e-9);
  EXPECT_NEAR(x[0], oracle, 1e-6);
}

TEST(IgdUpdateTest, VanishingStepIsIdentity) {
  const ConvexSet ball = ConvexSet::L2Ball(1, 1.0);
  for (const LossFunction& f :
       {HalfSquare(5.0), LossFunction::Logistic(1.0, S(3.0), 1.0),
        LossFunction::Hinge(-1.0, S(2.0), 0.5)}) {
    EXPECT_NEAR(IgdUpdate(S(0.7), f, 1e-12, ball)[0], 0.7, 1e-9);
  }
}

// Proximal steps for every loss kind and set kind against a brute-force
// minimization of the written-out objective.
TEST(IgdUpdateTest, ProxMatchesGridNewtonOracle) {
  Rng rng = MakeRng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const Vector v = GaussianVector(rng, d, 1.0);
    const Vector anchor = GaussianVector(rng, d, 0.5);
    const double eta = 0.2 + 0.3 * (trial % 4);
    const double y = 0.8;
    const LossFunction f = trial % 2 == 0
                               ? LossFunction::Quadratic(y, v, 0.7)
                               : LossFunction::Logistic(1.0, v, 0.7);
    const ConvexSet sets[] = {ConvexSet::AllSpace(d),
                              ConvexSet::L2Ball(d, 0.3),
                              ConvexSet::Box(Vector::Constant(d, -0.2),
                                             Vector::Constant(d, 0.25))};
    for (const ConvexSet& set : sets) {
      const Vector got = IgdUpdate(anchor, f, eta, set);
      // Penalized objective: leaving the set costs a steep quadratic, so the
      // unconstrained oracle minimum converges to the constrained one.
      auto objective = [&](const oracle::Vec& x) {
        const double s = v.dot(x);
        const double data = f.kind() == LossKind::kQuadratic
                                ? 0.5 * (y - s) * (y - s)
                                : std::log1p(std::exp(-s));
        const double outside = (set.Project(x) - x).squaredNorm();
        return 0.5 * (x - anchor).squaredNorm() +
               eta * (data + 0.35 * x.squaredNorm()) + 1e9 * outside;
      };
      oracle::Vec start = set.Project(anchor);
      // The penalty makes the Hessian ill-suited for Newton on bounded sets,
      // so the grid point is compared through 1-strong convexity:
      // F(ref) - F(got) >= |ref - got|^2 / 2 when got is the minimizer.
      const oracle::Vec ref =
          oracle::GridNewtonMinimize(objective, start, 1.0, d == 3 ? 81 : 401,
                                     set.bounded() ? 0 : 50);
      const double gap = objective(ref) - objective(got);
      EXPECT_GE(gap, -1e-9) << set.ToString();
      EXPECT_LE((got - ref).squaredNorm(), 2.0 * std::max(gap, 0.0) + 1e-9)
          << set.ToString();
    }
  }
}

TEST(GigaUpdateTest, Examples) {
  const ConvexSet box = ConvexSet::Box(S(-1), S(1));
  EXPECT_DOUBLE_EQ(GigaUpdate(S(0), S(-1), 0.5, box)[0], 0.5);
  EXPECT_DOUBLE_EQ(GigaUpdate(S(0), S(-1), 2.0, box)[0], 1.0);
  EXPECT_DOUBLE_EQ(GigaUpdate(S(0.3), S(0), 2.0, box)[0], 0.3);
  EXPECT_THROW(GigaUpdate(S(0), Vector::Zero(2), 1.0, box), ValidationError);
}

TEST(FtlUpdateTest, Examples) {
  const ConvexSet all = ConvexSet::AllSpace(1);
  // 0.5 (1 - x)^2 + 0.5 x^2.
  const std::vector<LossFunction> one = {
      LossFunction::Quadratic(1.0, S(1.0), 1.0)};
  EXPECT_NEAR(FtlUpdate(one, all)[0], 0.5, 1e-9);
  const std::vector<LossFunction> two = {
      LossFunction::Quadratic(1.0, S(1.0), 1.0),
      LossFunction::Quadratic(0.0, S(1.0), 1.0)};
  EXPECT_NEAR(FtlUpdate(two, all)[0], 0.25, 1e-9);
  const std::vector<LossFunction> sym = {
      LossFunction::Logistic(1.0, S(1.0), 1.0),
      LossFunction::Logistic(-1.0, S(1.0), 1.0)};
  EXPECT_NEAR(FtlUpdate(sym, ConvexSet::L2Ball(1, 2.0))[0], 0.0, 1e-9);
  EXPECT_THROW(FtlUpdate({}, all), ValidationError);
}

TEST(QftlUpdateTest, Examples) {
  Matrix v1 = Matrix::Constant(1, 1, 1.0);
  EXPECT_NEAR(QftlUpdate(v1, S(1.0), 1, 1.0)[0], 0.5, 1e-15);
  Matrix v2 = Matrix::Constant(1, 1, 2.0);
  EXPECT_NEAR(QftlUpdate(v2, S(1.0), 2, 1.0)[0], 0.25, 1e-15);
  EXPECT_EQ(QftlUpdate(Matrix::Identity(3, 3), Vector::Zero(3), 4, 1.0),
            Vector::Zero(3));
  EXPECT_THROW(QftlUpdate(-5.0 * Matrix::Identity(2, 2), Vector::Ones(2), 1,
                          1.0),
               SolverError);
  EXPECT_THROW(QftlUpdate(Matrix::Identity(2, 2), Vector::Ones(3), 1, 1.0),
               ValidationError);
}

// Brute-force oracle for the examples: minimize the written-out cumulative
// objective.
TEST(QftlUpdateTest, ExamplesMatchGridOracle) {
  const std::vector<oracle::RawQuad> one = {{1.0, S(1.0), 1.0}};
  const std::vector<oracle::RawQuad> two = {{1.0, S(1.0), 1.0},
                                            {0.0, S(1.0), 1.0}};
  for (const auto* terms : {&one, &two}) {
    const oracle::Vec ref = oracle::GridNewtonMinimize(
        [&](const oracle::Vec& x) { return oracle::QuadValue(*terms, x); },
        S(0.0), 2.0, 2001);
    Matrix v = Matrix::Constant(1, 1, static_cast<double>(terms->size()));
    EXPECT_NEAR(QftlUpdate(v, S(1.0), static_cast<int>(terms->size()), 1.0)[0],
                ref[0], 1e-6);
  }
}

TEST(QftlUpdateTest, NormBoundHolds) {
  Rng rng = MakeRng(51);
  const double r = 1.0, alpha = 0.5;
  QftlLearner learner(4, alpha);
  for (int t = 0; t < 200; ++t) {
    Vector v = GaussianVector(rng, 4, 1.0);
    v *= std::min(1.0, r / v.norm());
    const double y = std::uniform_real_distribution<double>(-r, r)(rng);
    const Vector& x = learner.Update(LossFunction::Quadratic(y, v, alpha));
    EXPECT_LE(x.norm(), 2 * r / alpha + 1e-12);
  }
  // V stays symmetric PSD.
  const Matrix& vs = learner.v_sum();
  EXPECT_LE((vs - vs.transpose()).norm(), 1e-12);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(vs).eigenvalues().minCoeff(),
            -1e-10);
}

// IGD and FTL iterates against grid + Newton on the written-out objectives
// (d <= 3, T <= 16, random quadratics).
TEST(LearnerOracleTest, IgdAndFtlMatchGridNewton) {
  Rng rng = MakeRng(61);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3;
    const int horizon = 4 + trial;
    std::vector<LossFunction> losses;
    std::vector<oracle::RawQuad> raw;
    for (int t = 0; t < horizon; ++t) {
      const Vector v = GaussianVector(rng, d, 0.7);
      const double y = std::normal_distribution<double>(0, 1)(rng);
      losses.push_back(LossFunction::Quadratic(y, v, 1.0));
      raw.push_back({y, v, 1.0});
    }
    const ConvexSet all = ConvexSet::AllSpace(d);
    IgdLearner igd(all, 1.0, Vector::Zero(d));
    FtlLearner ftl(all, Vector::Zero(d));
    for (int t = 1; t <= horizon; ++t) {
      const Vector anchor = igd.current();
      const Vector xi = igd.Update(losses[t - 1]);
      const Vector xf = ftl.Update(losses[t - 1]);
      const double eta = 1.0 / t;
      const oracle::RawQuad& q = raw[t - 1];
      const oracle::Vec ri = oracle::GridNewtonMinimize(
          [&](const oracle::Vec& x) {
            return 0.5 * (x - anchor).squaredNorm() +
                   eta * oracle::QuadValue({q}, x);
          },
          anchor, 2.0, d == 3 ? 41 : 201);
      const std::vector<oracle::RawQuad> prefix(raw.begin(), raw.begin() + t);
      const oracle::Vec rf = oracle::GridNewtonMinimize(
          [&](const oracle::Vec& x) { return oracle::QuadValue(prefix, x); },
          Vector::Zero(d), 3.0, d == 3 ? 41 : 201);
      EXPECT_LE((xi - ri).norm(), 1e-6);
      EXPECT_LE((xf - rf).norm(), 1e-6);
    }
  }
}

TEST(LearnerOracleTest, FtlAgreesWithQftl) {
  Rng rng = MakeRng(62);
  const int d = 5;
  FtlLearner ftl(ConvexSet::AllSpace(d), Vector::Zero(d));
  QftlLearner qftl(d, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Vector v = GaussianVector(rng, d, 0.5);
    const LossFunction f = LossFunction::Quadratic(v.sum() * 0.3, v, 1.0);
    EXPECT_LE((ftl.Update(f) - qftl.Update(f)).norm(), 1e-8);
  }
}

TEST(LearnerTest, GigaReplaysInitialPointDuringBurnIn) {
  const ConvexSet ball = ConvexSet::L2Ball(2, 1.0);
  const Vector x1 = Vector::Constant(2, 0.1);
  GigaLearner giga(ball, 1.0, 5, x1);
  for (int t = 1; t < 5; ++t) {
    EXPECT_EQ(giga.Update(LossFunction::Quadratic(1.0, Vector::Ones(2), 1.0)),
              x1);
  }
  EXPECT_NE(giga.Update(LossFunction::Quadratic(1.0, Vector::Ones(2), 1.0)),
            x1);
  EXPECT_EQ(giga.round(), 6);
}

TEST(LearnerTest, FactoryAndValidation) {
  const ConvexSet ball = ConvexSet::L2Ball(2, 1.0);
  LearnerParams params;
  EXPECT_THROW(MakeLearner(LearnerKind::kGiga, ball, params, Vector::Zero(2)),
               ValidationError);
  params.grad_lipschitz = 2.0;
  auto giga = MakeLearner(LearnerKind::kGiga, ball, params, Vector::Zero(2));
  EXPECT_EQ(static_cast<const GigaLearner&>(*giga).burn_in(), 8);
  EXPECT_THROW(IgdLearner(ball, 1.0, Vector::Constant(2, 5.0)),
               ValidationError);
  QftlLearner q(2, 1.0);
  EXPECT_THROW(q.Update(LossFunction::Logistic(1.0, Vector::Ones(2), 1.0)),
               ValidationError);
  EXPECT_THROW(q.Update(LossFunction::Quadratic(1.0, Vector::Ones(2), 2.0)),
               ValidationError);
}

TEST(LearnerTest, CloneIsIndependent) {
  const ConvexSet ball = ConvexSet::L2Ball(1, 1.0);
  FtlLearner a(ball, S(0));
  a.Update(HalfSquare(0.5).WithAlpha(1.0));
  auto b = a.Clone();
  a.Update(HalfSquare(-0.5).WithAlpha(1.0));
  EXPECT_EQ(b->round(), 2);
  EXPECT_EQ(a.round(), 3);
  EXPECT_NE(a.current()[0], b->current()[0]);
}

// Neighboring streams differing in one loss: t |x_{t+1} - x'_{t+1}| bounded
// by the preset scale for IGD (2L) and FTL (2L/alpha).
void CheckSensitivity(LearnerKind kind, LossKind loss_kind, int trials) {
  Rng rng = MakeRng(71 + static_cast<int>(kind));
  for (int trial = 0; trial < trials; ++trial) {
    const int d = 1 + trial % 5;
    const int horizon = 16 + trial % 48;
    const ConvexSet set = ConvexSet::L2Ball(d, 1.0);
    auto draw = [&]() {
      Vector v = GaussianVector(rng, d, 1.0);
      v /= std::max(1.0, v.norm());
      const double y = std::uniform_real_distribution<double>(-1, 1)(rng);
      return loss_kind == LossKind::kQuadratic
                 ? LossFunction::Quadratic(y, v, 1.0)
                 : LossFunction::Logistic(y >= 0 ? 1.0 : -1.0, v, 1.0);
    };
    std::vector<LossFunction> a;
    for (int t = 0; t < horizon; ++t) a.push_back(draw());
    std::vector<LossFunction> b = a;
    const int tau = std::uniform_int_distribution<int>(0, horizon - 1)(rng);
    b[tau] = draw();
    std::vector<LossFunction> both = a;
    both.push_back(b[tau]);
    const LossConstants k = DeriveConstants(both, set);
    const double lambda = SensitivityProfile::For(kind, k).lambda;
    LearnerParams params;
    params.grad_lipschitz = k.grad_lipschitz;
    const Vector x1 = set.SampleUniform(rng);
    auto la = MakeLearner(kind, set, params, x1);
    auto lb = MakeLearner(kind, set, params, x1);
    for (int t = 1; t <= horizon; ++t) {
      const Vector& xa = la->Update(a[t - 1]);
      const Vector& xb = lb->Update(b[t - 1]);
      ASSERT_LE((xa - xb).norm(), lambda / t + 1e-7)
          << LearnerKindName(kind) << " trial " << trial << " t " << t;
    }
  }
}

TEST(SensitivityTest, Igd) {
  CheckSensitivity(LearnerKind::kIgd, LossKind::kQuadratic, 100);
  CheckSensitivity(LearnerKind::kIgd, LossKind::kLogistic, 100);
}

TEST(SensitivityTest, Ftl) {
  CheckSensitivity(LearnerKind::kFtl, LossKind::kQuadratic, 100);
  CheckSensitivity(LearnerKind::kFtl, LossKind::kLogistic, 50);
}

TEST(SensitivityTest, GigaRandomPairs) {
  CheckSensitivity(LearnerKind::kGiga, LossKind::kQuadratic, 100);
  CheckSensitivity(LearnerKind::kGiga, LossKind::kLogistic, 100);
}

// The 2G/(alpha t) scale for GIGA is not a worst-case bound: when the
// replaced loss arrives at step t the iterates separate by up to
// eta_t |grad f - grad f'| = (2/(alpha t)) 2G. Linear losses +/- g x with
// 0.5 x^2 regularization on a wide interval get close to that.
TEST(SensitivityTest, GigaAdversarialPairExceedsPresetScale) {
  const double g = 10.0, alpha = 1.0;
  const ConvexSet set = ConvexSet::Box(S(-100), S(100));
  // f(x) = 0.5 (y - v x)^2 + 0.5 x^2 with tiny v acts as a linear term -yv x.
  const double v = 1e-3;
  auto linear = [&](double sign) {
    return LossFunction::Quadratic(sign * g / v, S(v), alpha);
  };
  const int horizon = 16;
  const int burn_in = 2;  // data-independent rounds before the change
  GigaLearner a(set, alpha, burn_in, S(0));
  GigaLearner b(set, alpha, burn_in, S(0));
  std::vector<LossFunction> common(horizon, linear(0.0));
  double worst_ratio = 0.0;
  double grad_bound = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const LossFunction fa = t == burn_in ? linear(1.0) : common[t - 1];
    const LossFunction fb = t == burn_in ? linear(-1.0) : common[t - 1];
    grad_bound = std::max({grad_bound, fa.Gradient(a.current()).norm(),
                           fb.Gradient(b.current()).norm()});
    const double gap = (a.Update(fa) - b.Update(fb)).norm();
    if (t >= burn_in) worst_ratio = std::max(worst_ratio, t * gap);
  }
  worst_ratio /= 2.0 * grad_bound / alpha;
  EXPECT_GT(worst_ratio, 1.5);
  EXPECT_LE(worst_ratio, 2.0 + 1e-9);
}

}  // namespace
}  // namespace dpocp
