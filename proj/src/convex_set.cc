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

#include "dpocp/convex_set.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "dpocp/errors.h"

namespace dpocp {

ConvexSet ConvexSet::L2Ball(Vector center, double radius) {
  if (center.size() < 1) throw ValidationError("L2Ball: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("L2Ball: radius must be positive and finite");
  }
  const int dim = static_cast<int>(center.size());
  return ConvexSet(Kind::kL2Ball, dim, std::move(center), Vector(), radius);
}

ConvexSet ConvexSet::L2Ball(int dim, double radius) {
  if (dim < 1) throw ValidationError("L2Ball: dimension must be >= 1");
  return L2Ball(Vector::Zero(dim), radius);
}

ConvexSet ConvexSet::Box(Vector lo, Vector hi) {
  if (lo.size() < 1 || lo.size() != hi.size()) {
    throw ValidationError("Box: lo and hi must have equal positive dimension");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw ValidationError("Box: require finite lo <= hi componentwise");
    }
  }
  const int dim = static_cast<int>(lo.size());
  return ConvexSet(Kind::kBox, dim, std::move(lo), std::move(hi), 0.0);
}

ConvexSet ConvexSet::AllSpace(int dim) {
  if (dim < 1) throw ValidationError("AllSpace: dimension must be >= 1");
  return ConvexSet(Kind::kAllSpace, dim, Vector(), Vector(), 0.0);
}

void ConvexSet::CheckDim(const Vector& x) const {
  if (x.size() != dim_) {
    std::ostringstream msg;
    msg << "dimension mismatch: set has dim " << dim_ << ", point has "
        << x.size();
    throw ValidationError(msg.str());
  }
}

Vector ConvexSet::Project(const Vector& x) const {
  CheckDim(x);
  switch (kind_) {
    case Kind::kAllSpace:
      return x;
    case Kind::kBox:
      return x.cwiseMax(a_).cwiseMin(b_);
    case Kind::kL2Ball: {
      const Vector offset = x - a_;
      const double norm = offset.norm();
      if (norm <= radius_) return x;
      // Rounding can leave the rescaled point an ulp outside; step the
      // factor down until the computed norm is within the radius.
      double scale = radius_ / norm;
      Vector y = a_ + offset * scale;
      while ((y - a_).norm() > radius_) {
        scale = std::nextafter(scale, 0.0);
        y = a_ + offset * scale;
      }
      return y;
    }
  }
  return x;
}

bool ConvexSet::Contains(const Vector& x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::kAllSpace:
      return x.allFinite();
    case Kind::kBox:
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double slack = tol * (1.0 + std::abs(a_[i]) + std::abs(b_[i]));
        if (x[i] < a_[i] - slack || x[i] > b_[i] + slack) return false;
      }
      return true;
    case Kind::kL2Ball:
      return (x - a_).norm() <= radius_ * (1.0 + tol);
  }
  return false;
}

double ConvexSet::Diameter() const {
  switch (kind_) {
    case Kind::kL2Ball:
      return 2.0 * radius_;
    case Kind::kBox:
      return (b_ - a_).norm();
    case Kind::kAllSpace:
      break;
  }
  throw ValidationError("diameter is undefined for an unbounded set");
}

double ConvexSet::MaxNorm() const {
  switch (kind_) {
    case Kind::kL2Ball:
      return a_.norm() + radius_;
    case Kind::kBox:
      return a_.cwiseAbs().cwiseMax(b_.cwiseAbs()).norm();
    case Kind::kAllSpace:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

Vector ConvexSet::SampleUniform(Rng& rng) const {
  switch (kind_) {
    case Kind::kL2Ball: {
      Vector direction = GaussianVector(rng, dim_, 1.0);
      double norm = direction.norm();
      while (norm == 0.0) {
        direction = GaussianVector(rng, dim_, 1.0);
        norm = direction.norm();
      }
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double scale = radius_ * std::pow(unit(rng), 1.0 / dim_);
      return a_ + direction * (scale / norm);
    }
    case Kind::kBox: {
      Vector out(dim_);
      for (int i = 0; i < dim_; ++i) {
        std::uniform_real_distribution<double> coord(a_[i], b_[i]);
        out[i] = a_[i] == b_[i] ? a_[i] : coord(rng);
      }
      return out;
    }
    case Kind::kAllSpace:
      break;
  }
  throw ValidationError("cannot sample uniformly from an unbounded set");
}

std::string ConvexSet::ToString() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kL2Ball:
      out << "L2Ball(dim=" << dim_ << ", |center|=" << a_.norm()
          << ", radius=" << radius_ << ")";
      break;
    case Kind::kBox:
      out << "Box(dim=" << dim_ << ")";
      break;
    case Kind::kAllSpace:
      out << "AllSpace(dim=" << dim_ << ")";
      break;
  }
  return out.str();
}

}  // namespace dpocp
