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

#ifndef DPOCP_TREESUM_H_
#define DPOCP_TREESUM_H_

#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dpocp/random.h"
#include "dpocp/types.h"

namespace dpocp {

// Node noise std of the streaming tree:
//   sigma^2 = (R^2 / eps) (log2 T)^2 ln(log2(T) / delta).
// Requires R > 0, eps > 0, 0 < delta < 1 and T >= 4.
double TreeSigma(double bound, double eps, double delta, int horizon);

// Streaming private prefix sums over a dyadic tree. Leaf tau (1-indexed)
// holds w_tau; an internal node holds the sum of the leaves below it and is
// populated, with one fresh N(0, sigma^2 I) draw, as soon as its last leaf
// arrives. The prefix [1..t] is answered from popcount(t) nodes, one per set
// bit of t.
//
// Only the most recent node of each level is needed to answer queries and
// complete parents, so by default memory is O(d log T). With `retain_all`
// every node is kept for the debug dump and the historical test hooks.
class SumTree {
 public:
  struct Node {
    Vector exact;
    Vector noisy;
  };

  // `horizon` is rounded up to a power of two. Items must satisfy
  // |w| <= bound.
  SumTree(int horizon, int dim, double sigma, double bound, Rng rng,
          bool retain_all = false);

  int capacity() const { return capacity_; }
  int depth() const { return depth_; }
  int dim() const { return dim_; }
  int count() const { return t_; }
  double sigma() const { return sigma_; }
  double bound() const { return bound_; }
  bool retains_all() const { return retain_all_; }

  // Inserts w_{t+1} and returns the noisy prefix sum over [1..t+1]. Throws
  // ValidationError when the capacity is exhausted or |w| exceeds the bound.
  Vector Insert(const Vector& w);

  // Noisy prefix sum for the current count (zero before any insert).
  Vector Query() const;

  // Number of nodes in the decomposition of [1..t]: popcount(t).
  static int NodeCount(int t);

  // Binary labels of the decomposition of [1..t], root-first. The root has
  // the empty label; left children append '0', right children '1'.
  std::vector<std::string> DecompositionLabels(int t) const;

  // Test hooks. Any prefix t <= count() is available with retain_all; the
  // current prefix always is.
  Vector QueryPrefix(int t) const;
  Vector ExactPrefix(int t) const;

  // One line per populated node, `label,exact_csv,noisy_csv`, in BFS order
  // (by depth, then left to right). The root label is written as "root".
  // Requires retain_all.
  void Dump(std::ostream& out) const;

 private:
  using Key = std::pair<int, int>;  // (height above leaves, index in level)

  std::string Label(int height, int index) const;
  const Node& Lookup(int height, int index) const;
  Vector SumPrefix(int t, bool noisy) const;

  int capacity_;
  int depth_;
  int dim_;
  double sigma_;
  double bound_;
  Rng rng_;
  bool retain_all_;
  int t_ = 0;
  // Latest completed node per height; index of that node per height.
  std::vector<Node> latest_;
  std::vector<int> latest_index_;
  std::map<Key, Node> all_;
};

// Row-major flattening of a square matrix into a d^2 vector.
Vector FlattenRowMajor(const Matrix& m);
// Inverse of FlattenRowMajor. Throws unless size is a perfect square.
Matrix Unflatten(const Vector& flat);
Matrix Symmetrize(const Matrix& m);

}  // namespace dpocp

#endif  // DPOCP_TREESUM_H_
