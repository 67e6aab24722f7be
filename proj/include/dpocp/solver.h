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

#ifndef DPOCP_SOLVER_H_
#define DPOCP_SOLVER_H_

#include <span>
#include <vector>

#include "dpocp/convex_set.h"
#include "dpocp/loss.h"
#include "dpocp/types.h"

namespace dpocp {

struct SolverOptions {
  // Stop when successive iterates move less than this.
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

// Sum of losses seen so far. Quadratic losses are folded into sufficient
// statistics (V = sum v v^T, u = sum y v, sum y^2, sum alpha) so evaluation
// cost does not grow with the stream; other losses are kept individually.
class CumulativeObjective {
 public:
  explicit CumulativeObjective(int dim);

  void Add(const LossFunction& loss);

  int dim() const { return dim_; }
  int count() const { return count_; }
  double alpha_sum() const { return alpha_sum_; }

  double Value(const Vector& x) const;
  Vector Gradient(const Vector& x) const;
  // Upper bound on the Lipschitz constant of Gradient(); exact for the
  // folded quadratic part, summed L_G for the rest. Throws ValidationError
  // if a nonsmooth loss was added.
  double Smoothness() const;

 private:
  int dim_;
  int count_ = 0;
  Matrix quad_v_;
  Vector quad_u_;
  double quad_yy_ = 0.0;
  double alpha_sum_ = 0.0;
  bool has_quadratic_ = false;
  std::vector<LossFunction> others_;
  double others_smoothness_ = 0.0;
  bool nonsmooth_ = false;
  mutable double cached_quad_lambda_ = -1.0;
};

// argmin over `set` of `objective`, by projected gradient descent with step
// 1 / Smoothness(), warm-started from `start`. Throws SolverError after
// `options.max_iterations` without meeting the tolerance.
Vector MinimizeProjected(const CumulativeObjective& objective,
                         const ConvexSet& set, const Vector& start,
                         const SolverOptions& options = {});

// argmin over `set` of 0.5 |x - anchor|^2 + eta * loss(x).
//
// For balls and the whole space the minimizer is computed exactly: with a
// multiplier mu for the ball constraint, stationarity reduces to a scalar
// monotone equation in s = <v, x>, and mu is found by bisection on the
// (monotone) distance to the center. Boxes fall back to projected gradient,
// which needs a smooth loss.
Vector ProximalStep(const Vector& anchor, const LossFunction& loss, double eta,
                    const ConvexSet& set, const SolverOptions& options = {});

}  // namespace dpocp

#endif  // DPOCP_SOLVER_H_
