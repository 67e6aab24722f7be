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

#ifndef DPOCP_LEARNERS_H_
#define DPOCP_LEARNERS_H_

#include <memory>
#include <optional>
#include <span>
#include <string>

#include "dpocp/convex_set.h"
#include "dpocp/loss.h"
#include "dpocp/random.h"
#include "dpocp/solver.h"
#include "dpocp/types.h"

namespace dpocp {

enum class LearnerKind { kIgd, kGiga, kFtl, kQftl };

std::string LearnerKindName(LearnerKind kind);

// Step size after t observed losses: 1/(alpha t) for IGD, 2/(alpha t) for
// GIGA. Throws ValidationError for other kinds, t < 1 or alpha <= 0.
double StepSize(LearnerKind kind, double alpha, int t);

// Number of rounds GIGA plays a data-independent point before its updates
// start: ceil(2 L_G^2 / alpha^2), at least 1.
int GigaBurnIn(double grad_lipschitz, double alpha);

// Single-step updates. Each returns x_{t+1} given x_t and round-t data.

// argmin over `set` of 0.5|x - x_t|^2 + eta f_t(x).
Vector IgdUpdate(const Vector& x_t, const LossFunction& loss, double eta,
                 const ConvexSet& set, const SolverOptions& options = {});

// project(set, x_t - eta * grad).
Vector GigaUpdate(const Vector& x_t, const Vector& grad, double eta,
                  const ConvexSet& set);

// argmin over `set` of sum of `losses`, warm-started at `warm_start` (or the
// projection of the origin).
Vector FtlUpdate(std::span<const LossFunction> losses, const ConvexSet& set,
                 const std::optional<Vector>& warm_start = std::nullopt,
                 const SolverOptions& options = {});

// Solves (t alpha I + V) x = u by Cholesky. Throws SolverError if the
// matrix is not positive definite.
Vector QftlUpdate(const Matrix& v_sum, const Vector& u_sum, int t,
                  double alpha);

// Initial iterate: uniform over a bounded set, the origin otherwise.
Vector InitialPoint(const ConvexSet& set, Rng& rng);

// A non-private online learner. Holds the uncorrupted iterate x_t that is
// played at round t (t starts at 1). Single-owner mutable state.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  virtual LearnerKind kind() const = 0;
  virtual std::unique_ptr<OnlineLearner> Clone() const = 0;

  const Vector& current() const { return x_; }
  int round() const { return t_; }
  const ConvexSet& set() const { return set_; }

  // Observes f_t and advances to x_{t+1}.
  const Vector& Update(const LossFunction& loss);

 protected:
  OnlineLearner(ConvexSet set, Vector x1);
  virtual Vector Next(const LossFunction& loss) = 0;

  ConvexSet set_;
  Vector x_;
  int t_ = 1;
};

class IgdLearner : public OnlineLearner {
 public:
  IgdLearner(ConvexSet set, double alpha, Vector x1,
             SolverOptions options = {});
  LearnerKind kind() const override { return LearnerKind::kIgd; }
  std::unique_ptr<OnlineLearner> Clone() const override;

 private:
  Vector Next(const LossFunction& loss) override;
  double alpha_;
  SolverOptions options_;
};

// Projected gradient with eta_t = 2/(alpha t). For t < burn_in the update
// is skipped, so rounds 1..burn_in all play the data-independent x1.
class GigaLearner : public OnlineLearner {
 public:
  GigaLearner(ConvexSet set, double alpha, int burn_in, Vector x1);
  LearnerKind kind() const override { return LearnerKind::kGiga; }
  std::unique_ptr<OnlineLearner> Clone() const override;
  int burn_in() const { return burn_in_; }

 private:
  Vector Next(const LossFunction& loss) override;
  double alpha_;
  int burn_in_;
};

class FtlLearner : public OnlineLearner {
 public:
  FtlLearner(ConvexSet set, Vector x1, SolverOptions options = {});
  LearnerKind kind() const override { return LearnerKind::kFtl; }
  std::unique_ptr<OnlineLearner> Clone() const override;
  const CumulativeObjective& objective() const { return objective_; }

 private:
  Vector Next(const LossFunction& loss) override;
  CumulativeObjective objective_;
  SolverOptions options_;
};

// Closed-form FTL for regularized quadratic losses with common alpha. The
// feasible set is the whole space.
class QftlLearner : public OnlineLearner {
 public:
  QftlLearner(int dim, double alpha);
  LearnerKind kind() const override { return LearnerKind::kQftl; }
  std::unique_ptr<OnlineLearner> Clone() const override;
  const Matrix& v_sum() const { return v_sum_; }
  const Vector& u_sum() const { return u_sum_; }

 private:
  Vector Next(const LossFunction& loss) override;
  double alpha_;
  Matrix v_sum_;
  Vector u_sum_;
};

// Parameters shared by the factory below.
struct LearnerParams {
  double alpha = 1.0;
  std::optional<double> grad_lipschitz;  // required for GIGA
  SolverOptions solver;
};

std::unique_ptr<OnlineLearner> MakeLearner(LearnerKind kind,
                                           const ConvexSet& set,
                                           const LearnerParams& params,
                                           Vector x1);

}  // namespace dpocp

#endif  // DPOCP_LEARNERS_H_
