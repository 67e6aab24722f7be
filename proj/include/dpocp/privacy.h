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

#ifndef DPOCP_PRIVACY_H_
#define DPOCP_PRIVACY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "dpocp/convex_set.h"
#include "dpocp/learners.h"
#include "dpocp/loss.h"
#include "dpocp/random.h"
#include "dpocp/regret.h"
#include "dpocp/types.h"

namespace dpocp {

// (eps, delta) target over a horizon of T rounds. The output-perturbation
// wrapper delivers (3 eps, 2 delta) for the whole run.
struct PrivacyBudget {
  double eps = 1.0;
  double delta = 0.01;
  int horizon = 2;

  // Requires eps > 0, 0 < delta < 2 exp(-2) and horizon >= 2. Outside that
  // range the exponent c below is not positive and the guarantee is void.
  void Validate() const;
};

// Noise scale of the output-perturbation wrapper:
//   c    = ln(0.5 ln(2/delta)) / (2 ln T)
//   beta = lambda T^(0.5+c) sqrt((2/eps) (ln(T/delta) + sqrt(eps)/T^(0.5+c)))
// The per-coordinate noise std after t observed losses is beta / t.
struct NoiseCalibration {
  double c = 0.0;
  double beta = 0.0;
  double lambda = 0.0;

  double NoiseStd(int t) const { return beta / t; }
};

NoiseCalibration Calibrate(const PrivacyBudget& budget, double lambda);

// Sensitivity scale lambda with |x_{t+1} - x'_{t+1}| <= lambda / t for
// neighboring streams.
struct SensitivityProfile {
  double lambda = 0.0;

  // 2L for alpha >= 1. The implicit step contracts by 1/(alpha (t+1)), so
  // for alpha < 1 the scale is widened to 2L/alpha.
  static SensitivityProfile Igd(double lipschitz, double alpha);
  // 2G for alpha >= 1, widened to 2G/alpha below that.
  static SensitivityProfile Giga(double grad_bound, double alpha);
  // 2L/alpha.
  static SensitivityProfile Ftl(double lipschitz, double alpha);

  static SensitivityProfile For(LearnerKind kind, const LossConstants& k);
};

// Output-perturbation wrapper around a non-private learner. The wrapped
// learner always advances from its clean iterate; only the published point
// carries noise:
//
//   x_{t+1}  = A(f_1..f_t)                 (clean, kept for the next round)
//   xhat_{t+1} = project(C, x_{t+1} + b),  b ~ N(0, (beta/t)^2 I)
//
// GIGA rounds inside the burn-in publish the data-independent point as is.
class PrivateLearner {
 public:
  PrivateLearner(std::unique_ptr<OnlineLearner> learner,
                 NoiseCalibration calibration, Rng rng);

  PrivateLearner(const PrivateLearner& other);
  PrivateLearner& operator=(const PrivateLearner&) = delete;
  PrivateLearner(PrivateLearner&&) = default;

  // Point published for the current round (xhat_t).
  const Vector& played() const { return played_; }
  const OnlineLearner& learner() const { return *learner_; }
  const NoiseCalibration& calibration() const { return calibration_; }
  int round() const { return learner_->round(); }
  // Noise vector that produced played(); zero for data-independent rounds.
  const Vector& last_noise() const { return last_noise_; }

  // Observes f_t and publishes xhat_{t+1}.
  const Vector& Step(const LossFunction& loss);

 private:
  std::unique_ptr<OnlineLearner> learner_;
  NoiseCalibration calibration_;
  Rng rng_;
  Vector played_;
  Vector last_noise_;
};

struct PrivateRunOptions {
  // Replaces the calibrated beta (0 gives the non-private trajectory).
  std::optional<double> beta_override;
  bool validate_constants = true;
  int validation_samples = 1000;
  // Hindsight optimum for the regret columns; can be skipped on huge
  // non-quadratic streams.
  bool compute_comparator = true;
  std::optional<Vector> initial_point;
  SolverOptions solver;
};

struct PrivateRunResult {
  LearnerTrace trace;
  NoiseCalibration calibration;
  int burn_in = 1;      // GIGA only; 1 otherwise
  Vector final_clean;   // x_{T+1} of the wrapped learner
  Vector final_played;  // xhat_{T+1}
};

// Runs PIGD, PGIGA or PFTL over `losses` (T = losses.size() must equal
// budget.horizon). Requires a bounded set. The trace's non-private column is
// the clean iterate of the same run, which is the non-private learner's
// trajectory.
PrivateRunResult RunPrivate(LearnerKind kind,
                            std::span<const LossFunction> losses,
                            const ConvexSet& set, const PrivacyBudget& budget,
                            const LossConstants& constants, std::uint64_t seed,
                            const PrivateRunOptions& options = {});

}  // namespace dpocp

#endif  // DPOCP_PRIVACY_H_
