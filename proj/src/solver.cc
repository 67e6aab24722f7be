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

#include "dpocp/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpocp/errors.h"

namespace dpocp {
namespace {

struct LinkRoot {
  double s;      // <v, x> at the solution
  double slope;  // element of the (sub)differential of g used at s
};

// Solves s - a + b * g'(s) = 0 for s, with b >= 0. The left side is
// strictly increasing in s, so the root is unique.
LinkRoot SolveLinkEquation(const LossFunction& loss, double a, double b) {
  switch (loss.kind()) {
    case LossKind::kQuadratic: {
      const double s = (a + b * loss.target()) / (1.0 + b);
      return {s, s - loss.target()};
    }
    case LossKind::kHinge: {
      const double label = loss.target();
      if (label * a >= 1.0) return {a, 0.0};
      const double s1 = a + b * label;
      if (label * s1 < 1.0) return {s1, -label};
      // Root sits on the kink s = label; recover the subgradient multiplier.
      return {label, (a - label) / b};
    }
    case LossKind::kLogistic: {
      // |g'| < 1, so the root lies in [a - b, a + b].
      double lo = a - b;
      double hi = a + b;
      double s = a;
      for (int iter = 0; iter < 200; ++iter) {
        const double phi = s - a + b * loss.LinkDerivative(s);
        if (phi == 0.0) break;
        if (phi > 0.0) {
          hi = s;
        } else {
          lo = s;
        }
        const double dphi = 1.0 + b * loss.LinkCurvature(s);
        double next = s - phi / dphi;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - s);
        s = next;
        const double scale = 1e-15 * (1.0 + std::abs(s));
        if (step <= scale || hi - lo <= scale) {
          break;
        }
      }
      return {s, loss.LinkDerivative(s)};
    }
  }
  return {a, 0.0};
}

// Minimizer of 0.5|x - anchor|^2 + eta f(x) + 0.5 mu |x - center|^2 over
// the whole space.
Vector PenalizedProx(const Vector& anchor, const LossFunction& loss,
                     double eta, double mu, const Vector& center) {
  const Vector p = mu > 0.0 ? Vector(anchor + mu * center) : anchor;
  const double k = 1.0 / (1.0 + eta * loss.alpha() + mu);
  const Vector& v = loss.feature();
  const double vv = v.squaredNorm();
  if (vv == 0.0) return k * p;
  const LinkRoot root = SolveLinkEquation(loss, k * v.dot(p), k * eta * vv);
  return k * (p - eta * root.slope * v);
}

void CheckConverged(int iterations, const SolverOptions& options,
                    const char* who) {
  if (iterations >= options.max_iterations) {
    std::ostringstream msg;
    msg << who << ": no convergence after " << options.max_iterations
        << " iterations (check the declared loss constants)";
    throw SolverError(msg.str());
  }
}

}  // namespace

CumulativeObjective::CumulativeObjective(int dim)
    : dim_(dim), quad_v_(Matrix::Zero(dim, dim)), quad_u_(Vector::Zero(dim)) {
  if (dim < 1) throw ValidationError("objective dimension must be >= 1");
}

void CumulativeObjective::Add(const LossFunction& loss) {
  if (loss.dim() != dim_) throw ValidationError("objective: dimension mismatch");
  ++count_;
  alpha_sum_ += loss.alpha();
  if (loss.kind() == LossKind::kQuadratic) {
    const Vector& v = loss.feature();
    quad_v_.selfadjointView<Eigen::Lower>().rankUpdate(v);
    quad_u_ += loss.target() * v;
    quad_yy_ += loss.target() * loss.target();
    has_quadratic_ = true;
    cached_quad_lambda_ = -1.0;
    return;
  }
  if (auto lg = loss.GradLipschitz()) {
    others_smoothness_ += *lg - loss.alpha();
  } else {
    nonsmooth_ = true;
  }
  others_.push_back(loss);
}

double CumulativeObjective::Value(const Vector& x) const {
  double value = 0.5 * alpha_sum_ * x.squaredNorm();
  if (has_quadratic_) {
    const Matrix full = quad_v_.selfadjointView<Eigen::Lower>();
    value += 0.5 * x.dot(full * x) - quad_u_.dot(x) + 0.5 * quad_yy_;
  }
  for (const LossFunction& loss : others_) {
    value += loss.Link(loss.feature().dot(x));
  }
  return value;
}

Vector CumulativeObjective::Gradient(const Vector& x) const {
  Vector grad = alpha_sum_ * x;
  if (has_quadratic_) {
    grad += quad_v_.selfadjointView<Eigen::Lower>() * x - quad_u_;
  }
  for (const LossFunction& loss : others_) {
    grad += loss.LinkDerivative(loss.feature().dot(x)) * loss.feature();
  }
  return grad;
}

double CumulativeObjective::Smoothness() const {
  if (nonsmooth_) {
    throw ValidationError(
        "projected-gradient solver needs smooth losses (hinge is nonsmooth)");
  }
  double lambda = 0.0;
  if (has_quadratic_) {
    if (cached_quad_lambda_ < 0.0) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(
          quad_v_.selfadjointView<Eigen::Lower>(), Eigen::EigenvaluesOnly);
      cached_quad_lambda_ = std::max(0.0, eig.eigenvalues().maxCoeff());
    }
    lambda = cached_quad_lambda_;
  }
  return lambda + alpha_sum_ + others_smoothness_;
}

Vector MinimizeProjected(const CumulativeObjective& objective,
                         const ConvexSet& set, const Vector& start,
                         const SolverOptions& options) {
  if (objective.count() == 0) throw ValidationError("empty objective");
  const double smoothness = objective.Smoothness();
  if (!(smoothness > 0.0)) {
    throw ValidationError("objective has zero curvature bound");
  }
  const double step = 1.0 / smoothness;
  Vector x = set.Project(start);
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    Vector next = set.Project(x - step * objective.Gradient(x));
    const double moved = (next - x).norm();
    x = std::move(next);
    if (moved <= options.tolerance) break;
  }
  CheckConverged(iter, options, "MinimizeProjected");
  return x;
}

Vector ProximalStep(const Vector& anchor, const LossFunction& loss, double eta,
                    const ConvexSet& set, const SolverOptions& options) {
  if (anchor.size() != set.dim() || loss.dim() != set.dim()) {
    throw ValidationError("ProximalStep: dimension mismatch");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ValidationError("ProximalStep: step size must be positive");
  }
  switch (set.kind()) {
    case ConvexSet::Kind::kAllSpace:
      return PenalizedProx(anchor, loss, eta, 0.0, anchor);
    case ConvexSet::Kind::kL2Ball: {
      const Vector& center = set.center();
      const double radius = set.radius();
      Vector x = PenalizedProx(anchor, loss, eta, 0.0, center);
      if ((x - center).norm() <= radius) return x;
      // Distance to the center is nonincreasing in mu; bracket then bisect.
      double lo = 0.0;
      double hi = 1.0;
      x = PenalizedProx(anchor, loss, eta, hi, center);
      int grow = 0;
      while ((x - center).norm() > radius) {
        lo = hi;
        hi *= 2.0;
        x = PenalizedProx(anchor, loss, eta, hi, center);
        if (++grow > 2000) {
          throw SolverError("ProximalStep: cannot bracket the ball multiplier");
        }
      }
      for (int iter = 0; iter < 200 && hi - lo > 1e-16 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const Vector trial = PenalizedProx(anchor, loss, eta, mid, center);
        if ((trial - center).norm() > radius) {
          lo = mid;
        } else {
          hi = mid;
          x = trial;
        }
      }
      return set.Project(x);
    }
    case ConvexSet::Kind::kBox: {
      if (!loss.smooth()) {
        throw ValidationError("ProximalStep on a box needs a smooth loss");
      }
      const double smoothness = 1.0 + eta * *loss.GradLipschitz();
      const double step = 1.0 / smoothness;
      Vector x = set.Project(anchor);
      int iter = 0;
      for (; iter < options.max_iterations; ++iter) {
        const Vector grad = (x - anchor) + eta * loss.Gradient(x);
        Vector next = set.Project(x - step * grad);
        const double moved = (next - x).norm();
        x = std::move(next);
        if (moved <= options.tolerance) break;
      }
      CheckConverged(iter, options, "ProximalStep");
      return x;
    }
  }
  return anchor;
}

}  // namespace dpocp
