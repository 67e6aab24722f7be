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

#include "dpocp/regret.h"

#include <sstream>

#include "dpocp/errors.h"

namespace dpocp {

Vector OfflineOptimum(std::span<const LossFunction> losses,
                      const ConvexSet& set, const SolverOptions& options) {
  if (losses.empty()) throw ValidationError("OfflineOptimum: empty stream");
  CumulativeObjective objective(set.dim());
  for (const LossFunction& loss : losses) objective.Add(loss);
  return MinimizeProjected(objective, set,
                           set.Project(Vector::Zero(set.dim())), options);
}

double TotalLoss(std::span<const LossFunction> losses, const Vector& x) {
  double total = 0.0;
  for (const LossFunction& loss : losses) total += loss.Evaluate(x);
  return total;
}

double Regret(std::span<const LossFunction> losses,
              std::span<const Vector> plays, const ConvexSet& set,
              const SolverOptions& options) {
  if (losses.empty()) throw ValidationError("Regret: empty sequence");
  if (losses.size() != plays.size()) {
    throw ValidationError("Regret: losses and plays differ in length");
  }
  double played = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t) {
    if (!set.Contains(plays[t], 1e-9)) {
      std::ostringstream msg;
      msg << "Regret: play at round " << (t + 1) << " is infeasible";
      throw ValidationError(msg.str());
    }
    played += losses[t].Evaluate(plays[t]);
  }
  const Vector best = OfflineOptimum(losses, set, options);
  return played - TotalLoss(losses, best);
}

void LearnerTrace::Reserve(std::size_t rounds) {
  plays_.reserve(rounds);
  cost_private_.reserve(rounds);
  cost_nonprivate_.reserve(rounds);
  noise_norm_.reserve(rounds);
  cum_cost_private_.reserve(rounds);
  cum_cost_nonprivate_.reserve(rounds);
}

void LearnerTrace::Append(Vector play, double cost_private,
                          double cost_nonprivate, double noise_norm) {
  const double prev_private =
      cum_cost_private_.empty() ? 0.0 : cum_cost_private_.back();
  const double prev_nonprivate =
      cum_cost_nonprivate_.empty() ? 0.0 : cum_cost_nonprivate_.back();
  plays_.push_back(std::move(play));
  cost_private_.push_back(cost_private);
  cost_nonprivate_.push_back(cost_nonprivate);
  noise_norm_.push_back(noise_norm);
  cum_cost_private_.push_back(prev_private + cost_private);
  cum_cost_nonprivate_.push_back(prev_nonprivate + cost_nonprivate);
}

void LearnerTrace::SetComparator(std::span<const LossFunction> losses,
                                 const Vector& comparator) {
  if (losses.size() != size()) {
    throw ValidationError("trace comparator: stream length mismatch");
  }
  comparator_ = comparator;
  comparator_cost_.clear();
  cum_comparator_cost_.clear();
  comparator_cost_.reserve(size());
  cum_comparator_cost_.reserve(size());
  double running = 0.0;
  for (const LossFunction& loss : losses) {
    const double cost = loss.Evaluate(comparator);
    running += cost;
    comparator_cost_.push_back(cost);
    cum_comparator_cost_.push_back(running);
  }
}

double LearnerTrace::CumRegretPrivate(std::size_t i) const {
  if (!has_comparator()) throw ValidationError("trace has no comparator");
  return cum_cost_private_.at(i) - cum_comparator_cost_.at(i);
}

double LearnerTrace::CumRegretNonPrivate(std::size_t i) const {
  if (!has_comparator()) throw ValidationError("trace has no comparator");
  return cum_cost_nonprivate_.at(i) - cum_comparator_cost_.at(i);
}

double LearnerTrace::FinalRegretPrivate() const {
  if (size() == 0) throw ValidationError("empty trace");
  return CumRegretPrivate(size() - 1);
}

double LearnerTrace::FinalRegretNonPrivate() const {
  if (size() == 0) throw ValidationError("empty trace");
  return CumRegretNonPrivate(size() - 1);
}

double LearnerTrace::MeanNoiseNorm() const {
  if (noise_norm_.empty()) return 0.0;
  double total = 0.0;
  for (double n : noise_norm_) total += n;
  return total / static_cast<double>(noise_norm_.size());
}

}  // namespace dpocp
