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

#ifndef DPOCP_LOSS_H_
#define DPOCP_LOSS_H_

#include <optional>
#include <span>
#include <string>

#include "dpocp/convex_set.h"
#include "dpocp/random.h"
#include "dpocp/types.h"

namespace dpocp {

enum class LossKind { kQuadratic, kLogistic, kHinge };

std::string LossKindName(LossKind kind);

// One round's convex cost. Every supported loss has the ridge form
//
//   f(x) = g(<v, x>) + (alpha / 2) |x|^2
//
// with a scalar convex link g:
//   quadratic: g(s) = 0.5 (y - s)^2
//   logistic:  g(s) = log(1 + exp(-label * s))
//   hinge:     g(s) = max(0, 1 - label * s)
//
// The shared structure lets the learners solve the implicit (proximal) step
// exactly through a scalar equation. Immutable value type.
class LossFunction {
 public:
  static LossFunction Quadratic(double y, Vector v, double alpha);
  static LossFunction Logistic(double label, Vector v, double alpha);
  static LossFunction Hinge(double label, Vector v, double alpha);

  LossKind kind() const { return kind_; }
  // Regression target y for quadratic loss, +/-1 label otherwise.
  double target() const { return target_; }
  const Vector& feature() const { return v_; }
  double alpha() const { return alpha_; }
  int dim() const { return static_cast<int>(v_.size()); }
  bool smooth() const { return kind_ != LossKind::kHinge; }

  // Same data term with regularization weight `alpha`.
  LossFunction WithAlpha(double alpha) const {
    return LossFunction(kind_, target_, v_, alpha);
  }

  double Evaluate(const Vector& x) const;
  // Gradient, or for hinge the subgradient that takes the zero side at the
  // kink.
  Vector Gradient(const Vector& x) const;

  // Scalar link g and its derivatives at s = <v, x>.
  double Link(double s) const;
  double LinkDerivative(double s) const;
  // g''(s); zero for hinge away from the kink.
  double LinkCurvature(double s) const;

  // Upper bound on sup |grad f(x)| over `set` (+inf if unbounded).
  double LipschitzBound(const ConvexSet& set) const;
  // Lipschitz constant of the gradient; absent for hinge.
  std::optional<double> GradLipschitz() const;

 private:
  LossFunction(LossKind kind, double target, Vector v, double alpha);

  LossKind kind_;
  double target_;
  Vector v_;
  double alpha_;
};

// Constants of a loss stream over a feasible set, as consumed by the
// learners and the noise calibration.
struct LossConstants {
  double alpha = 0.0;      // minimum strong convexity
  double lipschitz = 0.0;  // L, maximum Lipschitz constant over the set
  std::optional<double> grad_lipschitz;  // L_G, absent if any loss is nonsmooth
  double grad_bound = 0.0;  // G, maximum gradient norm over the set
};

// Analytic constants for `losses` over `set`. Throws ValidationError on an
// empty stream or mismatched dimensions.
LossConstants DeriveConstants(std::span<const LossFunction> losses,
                              const ConvexSet& set);

// Checks declared constants against the stream by sampling: alpha must not
// exceed any loss's curvature, and sampled gradient norms and value
// differences must respect L and G up to 1% slack. `samples` feasible points
// are drawn (spread across the stream). Throws ValidationError on failure.
void ValidateConstants(std::span<const LossFunction> losses,
                       const ConvexSet& set, const LossConstants& declared,
                       Rng& rng, int samples = 1000);

}  // namespace dpocp

#endif  // DPOCP_LOSS_H_
