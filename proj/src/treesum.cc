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

#include "dpocp/treesum.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dpocp/errors.h"

namespace dpocp {

namespace {

void AppendCsv(std::string& line, const Vector& v) {
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), ",%.17g", v[i]);
    line += buf;
  }
}

}  // namespace

double TreeSigma(double bound, double eps, double delta, int horizon) {
  if (horizon < 4) throw ValidationError("tree sigma: horizon must be >= 4");
  if (!(bound > 0.0) || !(eps > 0.0) || !std::isfinite(eps)) {
    throw ValidationError("tree sigma: need bound > 0 and finite eps > 0");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("tree sigma: delta must lie in (0, 1)");
  }
  const double levels = std::log2(static_cast<double>(horizon));
  const double var =
      bound * bound / eps * levels * levels * std::log(levels / delta);
  return std::sqrt(var);
}

SumTree::SumTree(int horizon, int dim, double sigma, double bound, Rng rng,
                 bool retain_all)
    : dim_(dim),
      sigma_(sigma),
      bound_(bound),
      rng_(std::move(rng)),
      retain_all_(retain_all) {
  if (horizon < 1) throw ValidationError("SumTree: horizon must be >= 1");
  if (dim < 1) throw ValidationError("SumTree: dim must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("SumTree: sigma must be finite and >= 0");
  }
  if (!(bound > 0.0)) throw ValidationError("SumTree: bound must be > 0");
  capacity_ = static_cast<int>(std::bit_ceil(static_cast<unsigned>(horizon)));
  depth_ = std::countr_zero(static_cast<unsigned>(capacity_));
  latest_.resize(depth_ + 1);
  latest_index_.assign(depth_ + 1, -1);
}

Vector SumTree::Insert(const Vector& w) {
  if (t_ >= capacity_) {
    std::ostringstream msg;
    msg << "SumTree: capacity " << capacity_ << " exceeded";
    throw ValidationError(msg.str());
  }
  if (w.size() != dim_) throw ValidationError("SumTree: dimension mismatch");
  const double norm = w.norm();
  if (!(norm <= bound_ * (1.0 + 1e-12))) {
    std::ostringstream msg;
    msg << "SumTree: item " << (t_ + 1) << " has norm " << norm
        << " above the bound " << bound_;
    throw ValidationError(msg.str());
  }
  ++t_;
  int height = 0;
  int index = t_ - 1;
  Node node{w, w + GaussianVector(rng_, dim_, sigma_)};
  for (;;) {
    // A right child completes its parent; the left sibling is the latest
    // node at this height.
    const bool completes_parent = (index % 2 == 1);
    Node parent;
    if (completes_parent) {
      if (latest_index_[height] != index - 1) {
        throw SolverError("SumTree: missing left sibling");
      }
      parent.exact = latest_[height].exact + node.exact;
      parent.noisy = parent.exact + GaussianVector(rng_, dim_, sigma_);
    }
    if (retain_all_) all_[{height, index}] = node;
    latest_[height] = std::move(node);
    latest_index_[height] = index;
    if (!completes_parent) break;
    node = std::move(parent);
    ++height;
    index /= 2;
  }
  return Query();
}

Vector SumTree::Query() const { return SumPrefix(t_, true); }

int SumTree::NodeCount(int t) {
  if (t < 0) throw ValidationError("NodeCount: t must be >= 0");
  return std::popcount(static_cast<unsigned>(t));
}

std::string SumTree::Label(int height, int index) const {
  const int bits = depth_ - height;
  std::string label(bits, '0');
  for (int b = 0; b < bits; ++b) {
    if ((index >> (bits - 1 - b)) & 1) label[b] = '1';
  }
  return label;
}

std::vector<std::string> SumTree::DecompositionLabels(int t) const {
  if (t < 0 || t > capacity_) {
    throw ValidationError("DecompositionLabels: t out of range");
  }
  std::vector<std::string> labels;
  for (int h = depth_; h >= 0; --h) {
    if ((t >> h) & 1) labels.push_back(Label(h, (t >> h) - 1));
  }
  return labels;
}

const SumTree::Node& SumTree::Lookup(int height, int index) const {
  if (latest_index_[height] == index) return latest_[height];
  if (retain_all_) {
    auto it = all_.find({height, index});
    if (it != all_.end()) return it->second;
  }
  throw ValidationError("SumTree: node " + Label(height, index) +
                        " is not retained");
}

Vector SumTree::SumPrefix(int t, bool noisy) const {
  if (t < 0 || t > t_) throw ValidationError("SumTree: prefix out of range");
  Vector sum = Vector::Zero(dim_);
  for (int h = depth_; h >= 0; --h) {
    if (!((t >> h) & 1)) continue;
    const Node& node = Lookup(h, (t >> h) - 1);
    sum += noisy ? node.noisy : node.exact;
  }
  return sum;
}

Vector SumTree::QueryPrefix(int t) const { return SumPrefix(t, true); }

Vector SumTree::ExactPrefix(int t) const { return SumPrefix(t, false); }

void SumTree::Dump(std::ostream& out) const {
  if (!retain_all_) throw ValidationError("SumTree: dump needs retain_all");
  std::vector<Key> keys;
  keys.reserve(all_.size());
  for (const auto& [key, node] : all_) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (const Key& key : keys) {
    const Node& node = all_.at(key);
    std::string line = Label(key.first, key.second);
    if (line.empty()) line = "root";
    AppendCsv(line, node.exact);
    AppendCsv(line, node.noisy);
    out << line << '\n';
  }
}

Vector FlattenRowMajor(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("flatten: matrix not square");
  Vector flat(m.size());
  const Eigen::Index d = m.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) flat[i * d + j] = m(i, j);
  }
  return flat;
}

Matrix Unflatten(const Vector& flat) {
  const auto d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(flat.size()))));
  if (d * d != flat.size() || d == 0) {
    throw ValidationError("unflatten: length is not a positive square");
  }
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = flat[i * d + j];
  }
  return m;
}

Matrix Symmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("symmetrize: matrix not square");
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace dpocp
