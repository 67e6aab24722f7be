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

#ifndef DPOCP_CONVEX_SET_H_
#define DPOCP_CONVEX_SET_H_

#include <string>

#include "dpocp/random.h"
#include "dpocp/types.h"

namespace dpocp {

// Feasible region of an online convex program. Every variant has an exact
// Euclidean projection. Immutable after construction.
class ConvexSet {
 public:
  enum class Kind { kL2Ball, kBox, kAllSpace };

  static ConvexSet L2Ball(Vector center, double radius);
  static ConvexSet L2Ball(int dim, double radius);  // centered at the origin
  static ConvexSet Box(Vector lo, Vector hi);
  static ConvexSet AllSpace(int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool bounded() const { return kind_ != Kind::kAllSpace; }

  // Ball accessors; only meaningful for kL2Ball.
  const Vector& center() const { return a_; }
  double radius() const { return radius_; }
  // Box accessors; only meaningful for kBox.
  const Vector& lo() const { return a_; }
  const Vector& hi() const { return b_; }

  // Unique nearest feasible point. Throws ValidationError on dimension
  // mismatch.
  Vector Project(const Vector& x) const;

  // Membership up to a relative slack of `tol`.
  bool Contains(const Vector& x, double tol = 1e-12) const;

  // 2*radius for balls, |hi - lo| for boxes. Throws for kAllSpace.
  double Diameter() const;

  // sup of |x| over the set; +inf for kAllSpace.
  double MaxNorm() const;

  // Uniform sample. Balls use direction-times-radius sampling (no
  // rejection); boxes sample each coordinate independently. Throws for
  // kAllSpace.
  Vector SampleUniform(Rng& rng) const;

  std::string ToString() const;

 private:
  ConvexSet(Kind kind, int dim, Vector a, Vector b, double radius)
      : kind_(kind), dim_(dim), a_(std::move(a)), b_(std::move(b)),
        radius_(radius) {}

  void CheckDim(const Vector& x) const;

  Kind kind_;
  int dim_;
  Vector a_;  // ball center or box lower corner
  Vector b_;  // box upper corner
  double radius_ = 0.0;
};

}  // namespace dpocp

#endif  // DPOCP_CONVEX_SET_H_
