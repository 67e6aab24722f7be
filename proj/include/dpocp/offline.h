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

#ifndef DPOCP_OFFLINE_H_
#define DPOCP_OFFLINE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "dpocp/convex_set.h"
#include "dpocp/loss.h"
#include "dpocp/solver.h"
#include "dpocp/types.h"

namespace dpocp {

// Private offline learner: one pass of IGD over the regularized losses
// l(.; z_t) + (alpha/2)|.|^2, average the iterates, perturb once, project.
struct PolConfig {
  double eps_p = 1.0;
  double delta = 0.01;
  double eps_g = 1.0;       // generalization target
  double lipschitz = 1.0;   // L of the unregularized loss over the set
  double xstar_norm = 1.0;  // stated |x*|; alpha and the set derive from it
  std::optional<double> beta_override;
  bool validate_losses = true;
  SolverOptions solver;

  double alpha() const { return eps_g / (xstar_norm * xstar_norm); }
  void Validate() const;
};

// beta = 2 sqrt(2) (L + alpha |x*|) ln T / (T eps_p) sqrt(ln(1/delta) + eps_p),
// widened by 1/alpha when alpha < 1 (the averaged iterate's sensitivity
// grows as 1/alpha there). Requires T >= 2.
double PolBeta(const PolConfig& config, int horizon);

// Feasible set actually used: L2Ball(0, |x*|) replaces an unbounded input.
ConvexSet PolSet(const ConvexSet& input, const PolConfig& config);

// Clean averaged iterate (1/T) sum_{t=1..T} x_t of IGD started at x1. The
// base losses carry no regularization; alpha is applied here. Exposed for
// the neighbor-sensitivity check.
Vector PolAverage(std::span<const LossFunction> base_losses,
                  const ConvexSet& set, double alpha, const Vector& x1,
                  const SolverOptions& options = {});

struct PolResult {
  Vector x_hat;      // published point
  Vector x_average;  // pre-noise average
  double beta = 0.0;
  double alpha = 0.0;
  ConvexSet set = ConvexSet::AllSpace(1);
};

// Runs the private offline learner on unregularized base losses l(.; z_t).
// Requires T >= 2, l(0; z) <= 1, and sampled gradient norms within 1% of L.
PolResult RunPol(std::span<const LossFunction> base_losses,
                 const ConvexSet& input_set, const PolConfig& config,
                 std::uint64_t seed);

// E[l(x_hat)] - E[l(x_star)] under an exact risk oracle.
double ExcessRisk(const Vector& x_hat, const Vector& x_star,
                  const std::function<double(const Vector&)>& risk);

}  // namespace dpocp

#endif  // DPOCP_OFFLINE_H_
