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

#include "dpocp/offline.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpocp/errors.h"
#include "dpocp/learners.h"
#include "dpocp/random.h"

namespace dpocp {

namespace {

constexpr std::uint64_t kValidationStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

}  // namespace

void PolConfig::Validate() const {
  if (!(eps_p > 0.0) || !std::isfinite(eps_p)) {
    throw ValidationError("pol: eps_p must be positive and finite");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("pol: delta must lie in (0, 1)");
  }
  if (!(eps_g > 0.0) || !(lipschitz > 0.0) || !(xstar_norm > 0.0)) {
    throw ValidationError("pol: eps_g, L and |x*| must be positive");
  }
  if (beta_override && !(*beta_override >= 0.0)) {
    throw ValidationError("pol: beta override must be >= 0");
  }
}

double PolBeta(const PolConfig& config, int horizon) {
  config.Validate();
  if (horizon < 2) throw ValidationError("pol: T must be >= 2");
  const double T = horizon;
  const double alpha = config.alpha();
  const double lip = config.lipschitz + alpha * config.xstar_norm;
  const double beta = 2.0 * std::sqrt(2.0) * lip * std::log(T) /
                      (T * config.eps_p) *
                      std::sqrt(std::log(1.0 / config.delta) + config.eps_p);
  return beta / std::min(1.0, alpha);
}

ConvexSet PolSet(const ConvexSet& input, const PolConfig& config) {
  if (input.bounded()) return input;
  return ConvexSet::L2Ball(input.dim(), config.xstar_norm);
}

Vector PolAverage(std::span<const LossFunction> base_losses,
                  const ConvexSet& set, double alpha, const Vector& x1,
                  const SolverOptions& options) {
  if (base_losses.empty()) throw ValidationError("pol: empty dataset");
  IgdLearner learner(set, alpha, x1, options);
  Vector sum = Vector::Zero(set.dim());
  for (const LossFunction& base : base_losses) {
    sum += learner.current();
    learner.Update(base.WithAlpha(alpha));
  }
  return sum / static_cast<double>(base_losses.size());
}

PolResult RunPol(std::span<const LossFunction> base_losses,
                 const ConvexSet& input_set, const PolConfig& config,
                 std::uint64_t seed) {
  config.Validate();
  const int T = static_cast<int>(base_losses.size());
  if (T < 2) throw ValidationError("pol: need at least 2 examples");
  PolResult result;
  result.alpha = config.alpha();
  result.set = PolSet(input_set, config);
  result.beta = config.beta_override.value_or(PolBeta(config, T));

  const Vector origin = Vector::Zero(result.set.dim());
  for (int t = 0; t < T; ++t) {
    const LossFunction& base = base_losses[t];
    if (base.dim() != result.set.dim()) {
      throw ValidationError("pol: example dimension mismatch");
    }
    if (base.alpha() != 0.0) {
      throw ValidationError("pol: base losses must be unregularized");
    }
    if (base.Evaluate(origin) > 1.0 + 1e-12) {
      std::ostringstream msg;
      msg << "pol: example " << (t + 1) << " has l(0; z) > 1";
      throw ValidationError(msg.str());
    }
  }
  if (config.validate_losses) {
    LossConstants declared;
    declared.alpha = 0.0;
    declared.lipschitz = config.lipschitz;
    declared.grad_bound = config.lipschitz;
    Rng check = MakeRng(seed, kValidationStream);
    ValidateConstants(base_losses, result.set, declared, check);
  }

  Rng init = MakeRng(seed, kInitStream);
  const Vector x1 = InitialPoint(result.set, init);
  result.x_average =
      PolAverage(base_losses, result.set, result.alpha, x1, config.solver);
  Rng noise = MakeRng(seed, kNoiseStream);
  result.x_hat = result.set.Project(
      result.x_average +
      GaussianVector(noise, result.set.dim(), result.beta));
  return result;
}

double ExcessRisk(const Vector& x_hat, const Vector& x_star,
                  const std::function<double(const Vector&)>& risk) {
  return risk(x_hat) - risk(x_star);
}

}  // namespace dpocp
