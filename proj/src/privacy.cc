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

#include "dpocp/privacy.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpocp/errors.h"

namespace dpocp {

namespace {

// Independent streams carved out of one run seed.
constexpr std::uint64_t kValidationStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

}  // namespace

void PrivacyBudget::Validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ValidationError("privacy budget: eps must be positive and finite");
  }
  const double delta_max = 2.0 * std::exp(-2.0);
  if (!(delta > 0.0) || !(delta < delta_max)) {
    std::ostringstream msg;
    msg << "privacy budget: delta must lie in (0, 2exp(-2) = " << delta_max
        << "), got " << delta;
    throw ValidationError(msg.str());
  }
  if (horizon < 2) throw ValidationError("privacy budget: horizon must be >= 2");
}

NoiseCalibration Calibrate(const PrivacyBudget& budget, double lambda) {
  budget.Validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("calibrate: lambda must be positive and finite");
  }
  const double T = budget.horizon;
  NoiseCalibration cal;
  cal.lambda = lambda;
  cal.c = std::log(0.5 * std::log(2.0 / budget.delta)) / (2.0 * std::log(T));
  const double growth = std::pow(T, 0.5 + cal.c);
  cal.beta = lambda * growth *
             std::sqrt((2.0 / budget.eps) *
                       (std::log(T / budget.delta) +
                        std::sqrt(budget.eps) / growth));
  return cal;
}

SensitivityProfile SensitivityProfile::Igd(double lipschitz, double alpha) {
  if (!(lipschitz > 0.0) || !(alpha > 0.0)) {
    throw ValidationError("IGD sensitivity needs L > 0 and alpha > 0");
  }
  return {2.0 * lipschitz / std::min(1.0, alpha)};
}

SensitivityProfile SensitivityProfile::Giga(double grad_bound, double alpha) {
  if (!(grad_bound > 0.0) || !(alpha > 0.0)) {
    throw ValidationError("GIGA sensitivity needs G > 0 and alpha > 0");
  }
  return {2.0 * grad_bound / std::min(1.0, alpha)};
}

SensitivityProfile SensitivityProfile::Ftl(double lipschitz, double alpha) {
  if (!(lipschitz > 0.0) || !(alpha > 0.0)) {
    throw ValidationError("FTL sensitivity needs L > 0 and alpha > 0");
  }
  return {2.0 * lipschitz / alpha};
}

SensitivityProfile SensitivityProfile::For(LearnerKind kind,
                                           const LossConstants& k) {
  switch (kind) {
    case LearnerKind::kIgd:
      return Igd(k.lipschitz, k.alpha);
    case LearnerKind::kGiga:
      return Giga(k.grad_bound, k.alpha);
    case LearnerKind::kFtl:
      return Ftl(k.lipschitz, k.alpha);
    case LearnerKind::kQftl:
      break;
  }
  throw ValidationError("no output-perturbation preset for " +
                        LearnerKindName(kind));
}

PrivateLearner::PrivateLearner(std::unique_ptr<OnlineLearner> learner,
                               NoiseCalibration calibration, Rng rng)
    : learner_(std::move(learner)),
      calibration_(calibration),
      rng_(std::move(rng)) {
  if (!learner_) throw ValidationError("PrivateLearner: null learner");
  if (!learner_->set().bounded()) {
    throw ValidationError("output perturbation requires a bounded set");
  }
  if (!(calibration_.beta >= 0.0)) {
    throw ValidationError("PrivateLearner: beta must be >= 0");
  }
  // x1 is data independent and published without noise.
  played_ = learner_->current();
  last_noise_ = Vector::Zero(played_.size());
}

PrivateLearner::PrivateLearner(const PrivateLearner& other)
    : learner_(other.learner_->Clone()),
      calibration_(other.calibration_),
      rng_(other.rng_),
      played_(other.played_),
      last_noise_(other.last_noise_) {}

const Vector& PrivateLearner::Step(const LossFunction& loss) {
  const int t = learner_->round();
  const Vector& clean = learner_->Update(loss);
  const auto* giga = dynamic_cast<const GigaLearner*>(learner_.get());
  if (giga != nullptr && t < giga->burn_in()) {
    // Burn-in rounds replay the fixed random point; no data was touched.
    played_ = clean;
    last_noise_.setZero();
    return played_;
  }
  last_noise_ = GaussianVector(rng_, clean.size(), calibration_.NoiseStd(t));
  played_ = learner_->set().Project(clean + last_noise_);
  return played_;
}

PrivateRunResult RunPrivate(LearnerKind kind,
                            std::span<const LossFunction> losses,
                            const ConvexSet& set, const PrivacyBudget& budget,
                            const LossConstants& constants, std::uint64_t seed,
                            const PrivateRunOptions& options) {
  if (kind == LearnerKind::kQftl) {
    throw ValidationError("use RunPqftl for the quadratic tree learner");
  }
  if (!set.bounded()) {
    throw ValidationError("private runs require a bounded feasible set");
  }
  if (losses.empty()) throw ValidationError("RunPrivate: empty loss stream");
  if (static_cast<std::size_t>(budget.horizon) != losses.size()) {
    std::ostringstream msg;
    msg << "RunPrivate: horizon " << budget.horizon << " differs from stream "
        << "length " << losses.size();
    throw ValidationError(msg.str());
  }
  if (options.validate_constants) {
    Rng check = MakeRng(seed, kValidationStream);
    ValidateConstants(losses, set, constants, check,
                      options.validation_samples);
  }

  PrivateRunResult result;
  const SensitivityProfile profile = SensitivityProfile::For(kind, constants);
  result.calibration = Calibrate(budget, profile.lambda);
  if (options.beta_override) {
    if (!(*options.beta_override >= 0.0)) {
      throw ValidationError("beta override must be >= 0");
    }
    result.calibration.beta = *options.beta_override;
  }

  Vector x1;
  if (options.initial_point) {
    x1 = *options.initial_point;
  } else {
    Rng init = MakeRng(seed, kInitStream);
    x1 = InitialPoint(set, init);
  }
  LearnerParams params;
  params.alpha = constants.alpha;
  params.grad_lipschitz = constants.grad_lipschitz;
  params.solver = options.solver;
  if (kind == LearnerKind::kGiga && !params.grad_lipschitz) {
    throw ValidationError("PGIGA needs smooth losses (L_G)");
  }
  auto learner = MakeLearner(kind, set, params, std::move(x1));
  if (const auto* giga = dynamic_cast<const GigaLearner*>(learner.get())) {
    result.burn_in = giga->burn_in();
  }
  PrivateLearner priv(std::move(learner), result.calibration,
                      MakeRng(seed, kNoiseStream));

  result.trace.Reserve(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    const LossFunction& loss = losses[i];
    const Vector& played = priv.played();
    const double cost_private = loss.Evaluate(played);
    const double cost_clean = loss.Evaluate(priv.learner().current());
    result.trace.Append(played, cost_private, cost_clean,
                        priv.last_noise().norm());
    try {
      priv.Step(loss);
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << "round " << (i + 1) << ": " << e.what();
      throw SolverError(msg.str());
    }
  }
  result.final_clean = priv.learner().current();
  result.final_played = priv.played();
  if (options.compute_comparator) {
    result.trace.SetComparator(losses,
                               OfflineOptimum(losses, set, options.solver));
  }
  return result;
}

}  // namespace dpocp
