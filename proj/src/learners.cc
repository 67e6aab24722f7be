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

#include "dpocp/learners.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpocp/errors.h"

namespace dpocp {

std::string LearnerKindName(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kIgd:
      return "igd";
    case LearnerKind::kGiga:
      return "giga";
    case LearnerKind::kFtl:
      return "ftl";
    case LearnerKind::kQftl:
      return "qftl";
  }
  return "unknown";
}

double StepSize(LearnerKind kind, double alpha, int t) {
  if (!(alpha > 0.0)) throw ValidationError("step size needs alpha > 0");
  if (t < 1) throw ValidationError("step size needs t >= 1");
  switch (kind) {
    case LearnerKind::kIgd:
      return 1.0 / (alpha * t);
    case LearnerKind::kGiga:
      return 2.0 / (alpha * t);
    default:
      break;
  }
  throw ValidationError("no step-size rule for " + LearnerKindName(kind));
}

int GigaBurnIn(double grad_lipschitz, double alpha) {
  if (!(alpha > 0.0) || !(grad_lipschitz >= 0.0)) {
    throw ValidationError("GIGA burn-in needs alpha > 0 and L_G >= 0");
  }
  const double rounds = 2.0 * grad_lipschitz * grad_lipschitz / (alpha * alpha);
  return std::max(1, static_cast<int>(std::ceil(rounds - 1e-12)));
}

Vector IgdUpdate(const Vector& x_t, const LossFunction& loss, double eta,
                 const ConvexSet& set, const SolverOptions& options) {
  return ProximalStep(x_t, loss, eta, set, options);
}

Vector GigaUpdate(const Vector& x_t, const Vector& grad, double eta,
                  const ConvexSet& set) {
  if (grad.size() != x_t.size()) {
    throw ValidationError("GigaUpdate: dimension mismatch");
  }
  return set.Project(x_t - eta * grad);
}

Vector FtlUpdate(std::span<const LossFunction> losses, const ConvexSet& set,
                 const std::optional<Vector>& warm_start,
                 const SolverOptions& options) {
  if (losses.empty()) throw ValidationError("FtlUpdate: need t >= 1 losses");
  CumulativeObjective objective(set.dim());
  for (const LossFunction& loss : losses) objective.Add(loss);
  const Vector start =
      warm_start.value_or(set.Project(Vector::Zero(set.dim())));
  return MinimizeProjected(objective, set, start, options);
}

Vector QftlUpdate(const Matrix& v_sum, const Vector& u_sum, int t,
                  double alpha) {
  if (v_sum.rows() != v_sum.cols() || v_sum.rows() != u_sum.size()) {
    throw ValidationError("QftlUpdate: shape mismatch");
  }
  if (t < 1 || !(alpha > 0.0)) {
    throw ValidationError("QftlUpdate: need t >= 1 and alpha > 0");
  }
  Matrix system = 0.5 * (v_sum + v_sum.transpose());
  system.diagonal().array() += t * alpha;
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw SolverError("QftlUpdate: t*alpha*I + V is not positive definite");
  }
  Vector x = llt.solve(u_sum);
  const double residual = (system * x - u_sum).norm();
  if (!(residual <= 1e-9 * (1.0 + u_sum.norm()))) {
    std::ostringstream msg;
    msg << "QftlUpdate: residual " << residual << " too large";
    throw SolverError(msg.str());
  }
  return x;
}

Vector InitialPoint(const ConvexSet& set, Rng& rng) {
  if (!set.bounded()) return Vector::Zero(set.dim());
  return set.SampleUniform(rng);
}

OnlineLearner::OnlineLearner(ConvexSet set, Vector x1)
    : set_(std::move(set)), x_(std::move(x1)) {
  if (x_.size() != set_.dim()) {
    throw ValidationError("initial point dimension does not match the set");
  }
  if (!set_.Contains(x_, 1e-9)) {
    throw ValidationError("initial point is infeasible");
  }
}

const Vector& OnlineLearner::Update(const LossFunction& loss) {
  if (loss.dim() != set_.dim()) {
    throw ValidationError("loss dimension does not match the learner");
  }
  x_ = Next(loss);
  ++t_;
  return x_;
}

IgdLearner::IgdLearner(ConvexSet set, double alpha, Vector x1,
                       SolverOptions options)
    : OnlineLearner(std::move(set), std::move(x1)),
      alpha_(alpha),
      options_(options) {
  if (!(alpha_ > 0.0)) throw ValidationError("IGD needs alpha > 0");
}

std::unique_ptr<OnlineLearner> IgdLearner::Clone() const {
  return std::make_unique<IgdLearner>(*this);
}

Vector IgdLearner::Next(const LossFunction& loss) {
  return IgdUpdate(x_, loss, StepSize(LearnerKind::kIgd, alpha_, t_), set_,
                   options_);
}

GigaLearner::GigaLearner(ConvexSet set, double alpha, int burn_in, Vector x1)
    : OnlineLearner(std::move(set), std::move(x1)),
      alpha_(alpha),
      burn_in_(burn_in) {
  if (!(alpha_ > 0.0)) throw ValidationError("GIGA needs alpha > 0");
  if (burn_in_ < 1) throw ValidationError("GIGA burn-in must be >= 1");
}

std::unique_ptr<OnlineLearner> GigaLearner::Clone() const {
  return std::make_unique<GigaLearner>(*this);
}

Vector GigaLearner::Next(const LossFunction& loss) {
  if (t_ < burn_in_) return x_;
  return GigaUpdate(x_, loss.Gradient(x_),
                    StepSize(LearnerKind::kGiga, alpha_, t_), set_);
}

FtlLearner::FtlLearner(ConvexSet set, Vector x1, SolverOptions options)
    : OnlineLearner(std::move(set), std::move(x1)),
      objective_(set_.dim()),
      options_(options) {}

std::unique_ptr<OnlineLearner> FtlLearner::Clone() const {
  return std::make_unique<FtlLearner>(*this);
}

Vector FtlLearner::Next(const LossFunction& loss) {
  objective_.Add(loss);
  return MinimizeProjected(objective_, set_, x_, options_);
}

QftlLearner::QftlLearner(int dim, double alpha)
    : OnlineLearner(ConvexSet::AllSpace(dim), Vector::Zero(dim)),
      alpha_(alpha),
      v_sum_(Matrix::Zero(dim, dim)),
      u_sum_(Vector::Zero(dim)) {
  if (!(alpha_ > 0.0)) throw ValidationError("QFTL needs alpha > 0");
}

std::unique_ptr<OnlineLearner> QftlLearner::Clone() const {
  return std::make_unique<QftlLearner>(*this);
}

Vector QftlLearner::Next(const LossFunction& loss) {
  if (loss.kind() != LossKind::kQuadratic) {
    throw ValidationError("QFTL accepts quadratic losses only");
  }
  if (std::abs(loss.alpha() - alpha_) > 1e-12 * alpha_) {
    throw ValidationError("QFTL loss alpha differs from the learner's alpha");
  }
  const Vector& v = loss.feature();
  v_sum_.noalias() += v * v.transpose();
  u_sum_ += loss.target() * v;
  return QftlUpdate(v_sum_, u_sum_, t_, alpha_);
}

std::unique_ptr<OnlineLearner> MakeLearner(LearnerKind kind,
                                           const ConvexSet& set,
                                           const LearnerParams& params,
                                           Vector x1) {
  switch (kind) {
    case LearnerKind::kIgd:
      return std::make_unique<IgdLearner>(set, params.alpha, std::move(x1),
                                          params.solver);
    case LearnerKind::kGiga: {
      if (!params.grad_lipschitz) {
        throw ValidationError("GIGA needs a gradient Lipschitz constant L_G");
      }
      return std::make_unique<GigaLearner>(
          set, params.alpha, GigaBurnIn(*params.grad_lipschitz, params.alpha),
          std::move(x1));
    }
    case LearnerKind::kFtl:
      return std::make_unique<FtlLearner>(set, std::move(x1), params.solver);
    case LearnerKind::kQftl:
      return std::make_unique<QftlLearner>(set.dim(), params.alpha);
  }
  throw ValidationError("unknown learner kind");
}

}  // namespace dpocp
