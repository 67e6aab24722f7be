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

#ifndef DPOCP_REGRET_H_
#define DPOCP_REGRET_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dpocp/convex_set.h"
#include "dpocp/loss.h"
#include "dpocp/solver.h"
#include "dpocp/types.h"

namespace dpocp {

// Best fixed point in hindsight: argmin over `set` of sum_t f_t, computed by
// the same projected-gradient solver the FTL learner uses.
Vector OfflineOptimum(std::span<const LossFunction> losses,
                      const ConvexSet& set, const SolverOptions& options = {});

// sum_t f_t(x).
double TotalLoss(std::span<const LossFunction> losses, const Vector& x);

// sum_t f_t(plays_t) - min_{x in set} sum_t f_t(x). Throws ValidationError on
// empty input, length mismatch or an infeasible play.
double Regret(std::span<const LossFunction> losses,
              std::span<const Vector> plays, const ConvexSet& set,
              const SolverOptions& options = {});

// Per-round record of a (possibly private) run next to its non-private
// counterpart. Cumulative regret columns are measured against a fixed
// comparator, normally the hindsight optimum of the whole stream, so the
// final row equals the run's regret.
class LearnerTrace {
 public:
  void Reserve(std::size_t rounds);

  // Appends round t = size() + 1.
  void Append(Vector play, double cost_private, double cost_nonprivate,
              double noise_norm);

  // Records f_t(comparator) for every round; call once after the run.
  void SetComparator(std::span<const LossFunction> losses,
                     const Vector& comparator);

  std::size_t size() const { return cost_private_.size(); }
  bool has_comparator() const { return !comparator_cost_.empty(); }

  const std::vector<Vector>& plays() const { return plays_; }
  const std::vector<double>& cost_private() const { return cost_private_; }
  const std::vector<double>& cost_nonprivate() const {
    return cost_nonprivate_;
  }
  const std::vector<double>& noise_norm() const { return noise_norm_; }
  const std::vector<double>& cum_cost_private() const {
    return cum_cost_private_;
  }
  const std::vector<double>& cum_cost_nonprivate() const {
    return cum_cost_nonprivate_;
  }
  const std::vector<double>& comparator_cost() const {
    return comparator_cost_;
  }
  const Vector& comparator() const { return comparator_; }

  // Cumulative regret after round i+1 (0-based index).
  double CumRegretPrivate(std::size_t i) const;
  double CumRegretNonPrivate(std::size_t i) const;

  double FinalRegretPrivate() const;
  double FinalRegretNonPrivate() const;
  double MeanNoiseNorm() const;

 private:
  std::vector<Vector> plays_;
  std::vector<double> cost_private_;
  std::vector<double> cost_nonprivate_;
  std::vector<double> noise_norm_;
  std::vector<double> cum_cost_private_;
  std::vector<double> cum_cost_nonprivate_;
  std::vector<double> comparator_cost_;
  std::vector<double> cum_comparator_cost_;
  Vector comparator_;
};

}  // namespace dpocp

#endif  // DPOCP_REGRET_H_
