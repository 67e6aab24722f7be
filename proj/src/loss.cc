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

#include "dpocp/loss.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpocp/errors.h"

namespace dpocp {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void CheckLabel(double label) {
  if (label != 1.0 && label != -1.0) {
    throw ValidationError("classification label must be +1 or -1");
  }
}

}  // namespace

std::string LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kQuadratic:
      return "quadratic";
    case LossKind::kLogistic:
      return "logistic";
    case LossKind::kHinge:
      return "hinge";
  }
  return "unknown";
}

LossFunction::LossFunction(LossKind kind, double target, Vector v,
                           double alpha)
    : kind_(kind), target_(target), v_(std::move(v)), alpha_(alpha) {
  if (v_.size() < 1) throw ValidationError("loss feature must be non-empty");
  if (!v_.allFinite() || !std::isfinite(target_)) {
    throw ValidationError("loss data must be finite");
  }
  if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
    throw ValidationError("loss alpha must be finite and >= 0");
  }
}

LossFunction LossFunction::Quadratic(double y, Vector v, double alpha) {
  return LossFunction(LossKind::kQuadratic, y, std::move(v), alpha);
}

LossFunction LossFunction::Logistic(double label, Vector v, double alpha) {
  CheckLabel(label);
  return LossFunction(LossKind::kLogistic, label, std::move(v), alpha);
}

LossFunction LossFunction::Hinge(double label, Vector v, double alpha) {
  CheckLabel(label);
  return LossFunction(LossKind::kHinge, label, std::move(v), alpha);
}

double LossFunction::Link(double s) const {
  switch (kind_) {
    case LossKind::kQuadratic: {
      const double r = target_ - s;
      return 0.5 * r * r;
    }
    case LossKind::kLogistic:
      return Softplus(-target_ * s);
    case LossKind::kHinge:
      return std::max(0.0, 1.0 - target_ * s);
  }
  return 0.0;
}

double LossFunction::LinkDerivative(double s) const {
  switch (kind_) {
    case LossKind::kQuadratic:
      return s - target_;
    case LossKind::kLogistic:
      return -target_ * Sigmoid(-target_ * s);
    case LossKind::kHinge:
      return target_ * s < 1.0 ? -target_ : 0.0;
  }
  return 0.0;
}

double LossFunction::LinkCurvature(double s) const {
  switch (kind_) {
    case LossKind::kQuadratic:
      return 1.0;
    case LossKind::kLogistic: {
      const double p = Sigmoid(target_ * s);
      return p * (1.0 - p);
    }
    case LossKind::kHinge:
      return 0.0;
  }
  return 0.0;
}

double LossFunction::Evaluate(const Vector& x) const {
  if (x.size() != v_.size()) throw ValidationError("loss: dimension mismatch");
  return Link(v_.dot(x)) + 0.5 * alpha_ * x.squaredNorm();
}

Vector LossFunction::Gradient(const Vector& x) const {
  if (x.size() != v_.size()) throw ValidationError("loss: dimension mismatch");
  return LinkDerivative(v_.dot(x)) * v_ + alpha_ * x;
}

double LossFunction::LipschitzBound(const ConvexSet& set) const {
  const double radius = set.MaxNorm();
  if (!std::isfinite(radius)) return std::numeric_limits<double>::infinity();
  const double vnorm = v_.norm();
  switch (kind_) {
    case LossKind::kQuadratic:
      return (vnorm * radius + std::abs(target_)) * vnorm + alpha_ * radius;
    case LossKind::kLogistic:
    case LossKind::kHinge:
      return vnorm + alpha_ * radius;
  }
  return 0.0;
}

std::optional<double> LossFunction::GradLipschitz() const {
  switch (kind_) {
    case LossKind::kQuadratic:
      return v_.squaredNorm() + alpha_;
    case LossKind::kLogistic:
      return 0.25 * v_.squaredNorm() + alpha_;
    case LossKind::kHinge:
      return std::nullopt;
  }
  return std::nullopt;
}

LossConstants DeriveConstants(std::span<const LossFunction> losses,
                              const ConvexSet& set) {
  if (losses.empty()) throw ValidationError("empty loss stream");
  LossConstants out;
  out.alpha = std::numeric_limits<double>::infinity();
  double grad_lip = 0.0;
  bool smooth = true;
  for (const LossFunction& loss : losses) {
    if (loss.dim() != set.dim()) {
      throw ValidationError("loss dimension does not match the feasible set");
    }
    out.alpha = std::min(out.alpha, loss.alpha());
    out.lipschitz = std::max(out.lipschitz, loss.LipschitzBound(set));
    if (auto lg = loss.GradLipschitz()) {
      grad_lip = std::max(grad_lip, *lg);
    } else {
      smooth = false;
    }
  }
  out.grad_bound = out.lipschitz;
  if (smooth) out.grad_lipschitz = grad_lip;
  return out;
}

void ValidateConstants(std::span<const LossFunction> losses,
                       const ConvexSet& set, const LossConstants& declared,
                       Rng& rng, int samples) {
  if (losses.empty()) throw ValidationError("empty loss stream");
  if (!set.bounded()) {
    throw ValidationError("constant validation needs a bounded feasible set");
  }
  for (const LossFunction& loss : losses) {
    if (loss.dim() != set.dim()) {
      throw ValidationError("loss dimension does not match the feasible set");
    }
    if (declared.alpha > loss.alpha() * (1.0 + 1e-12)) {
      throw ValidationError("declared alpha exceeds a loss's strong convexity");
    }
    if (declared.grad_lipschitz) {
      auto lg = loss.GradLipschitz();
      if (!lg) throw ValidationError("declared L_G for a nonsmooth loss");
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, losses.size() - 1);
  for (int i = 0; i < samples; ++i) {
    const LossFunction& loss = losses[pick(rng)];
    const Vector x = set.SampleUniform(rng);
    const Vector y = set.SampleUniform(rng);
    const double gnorm = loss.Gradient(x).norm();
    if (gnorm > 1.01 * declared.lipschitz + 1e-12) {
      std::ostringstream msg;
      msg << "sampled gradient norm " << gnorm << " exceeds declared L "
          << declared.lipschitz;
      throw ValidationError(msg.str());
    }
    if (gnorm > 1.01 * declared.grad_bound + 1e-12) {
      std::ostringstream msg;
      msg << "sampled gradient norm " << gnorm << " exceeds declared G "
          << declared.grad_bound << " by more than 1%";
      throw ValidationError(msg.str());
    }
    const double gap = std::abs(loss.Evaluate(x) - loss.Evaluate(y));
    if (gap > 1.01 * declared.lipschitz * (x - y).norm() + 1e-9) {
      throw ValidationError("sampled value gap violates declared L");
    }
  }
}

}  // namespace dpocp
