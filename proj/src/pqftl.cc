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

#include "dpocp/pqftl.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dpocp/errors.h"
#include "dpocp/learners.h"

namespace dpocp {

namespace {

constexpr std::uint64_t kVTreeStream = 4;
constexpr std::uint64_t kUTreeStream = 5;

double VSigma(const PqftlConfig& c) {
  if (c.sigma_override) return *c.sigma_override;
  return TreeSigma(c.bound * c.bound, c.eps / 2, c.delta / 2, c.horizon);
}

double USigma(const PqftlConfig& c) {
  if (c.sigma_override) return *c.sigma_override;
  return TreeSigma(c.u_bound.value_or(c.bound * c.bound), c.eps / 2,
                   c.delta / 2, c.horizon);
}

}  // namespace

void PqftlConfig::Validate() const {
  if (dim < 1) throw ValidationError("pqftl: dim must be >= 1");
  if (horizon < 4) throw ValidationError("pqftl: horizon must be >= 4");
  if (!(alpha > 0.0)) throw ValidationError("pqftl: alpha must be > 0");
  if (!(bound > 0.0)) throw ValidationError("pqftl: R must be > 0");
  if (u_bound && !(*u_bound > 0.0)) {
    throw ValidationError("pqftl: u-tree bound must be > 0");
  }
  if (sigma_override) {
    if (!(*sigma_override >= 0.0)) {
      throw ValidationError("pqftl: sigma override must be >= 0");
    }
  } else {
    if (!(delta > 0.0) || !(delta < 1.0)) {
      throw ValidationError("pqftl: delta must lie in (0, 1)");
    }
    // TreeSigma checks the remaining ranges.
    TreeSigma(1.0, eps / 2, delta / 2, horizon);
  }
}

PqftlLearner::PqftlLearner(const PqftlConfig& config, std::uint64_t seed)
    : config_((config.Validate(), config)),
      v_tree_(config.horizon, config.dim * config.dim, VSigma(config),
              config.bound * config.bound, MakeRng(seed, kVTreeStream),
              config.retain_tree_nodes),
      u_tree_(config.horizon, config.dim, USigma(config),
              config.u_bound.value_or(config.bound * config.bound),
              MakeRng(seed, kUTreeStream), config.retain_tree_nodes),
      played_(Vector::Zero(config.dim)) {}

Vector PqftlLearner::SolveNoisy(const Matrix& v_hat, const Vector& u_hat,
                                int t, double alpha, PqftlSolve mode,
                                double radius, PqftlStepInfo* info) {
  const Matrix v_sym = Symmetrize(v_hat);
  const double shift = t * alpha;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(v_sym);
  if (eig.info() != Eigen::Success) {
    throw SolverError("pqftl: eigen-decomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const Matrix& q = eig.eigenvectors();
  PqftlStepInfo local;
  local.min_eigenvalue = lambda.minCoeff() + shift;

  Vector x;
  if (mode == PqftlSolve::kPsdBall) {
    Vector inv(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (lambda[i] < 0.0) local.clamped = true;
      inv[i] = 1.0 / (shift + std::max(lambda[i], 0.0));
    }
    x = q * inv.asDiagonal() * (q.transpose() * u_hat);
  } else {
    Matrix system = v_sym;
    system.diagonal().array() += shift;
    Eigen::LLT<Matrix> llt(system);
    if (llt.info() == Eigen::Success) {
      x = llt.solve(u_hat);
    } else {
      local.clamped = true;
      const double floor = 1e-9 * shift;
      Vector inv(lambda.size());
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        inv[i] = 1.0 / std::max(lambda[i] + shift, floor);
      }
      x = q * inv.asDiagonal() * (q.transpose() * u_hat);
    }
  }
  local.raw_norm = x.norm();
  if (mode == PqftlSolve::kPsdBall && local.raw_norm > radius) {
    x *= radius / local.raw_norm;
  }
  if (info != nullptr) *info = local;
  return x;
}

const Vector& PqftlLearner::Step(const LossFunction& loss) {
  if (loss.kind() != LossKind::kQuadratic) {
    throw ValidationError("pqftl accepts quadratic losses only");
  }
  if (loss.dim() != config_.dim) {
    throw ValidationError("pqftl: loss dimension mismatch");
  }
  if (std::abs(loss.alpha() - config_.alpha) > 1e-12 * config_.alpha) {
    throw ValidationError("pqftl: loss alpha differs from the configured one");
  }
  const double r = config_.bound;
  const Vector& v = loss.feature();
  const double y = loss.target();
  if (v.norm() > r * (1.0 + 1e-12) || std::abs(y) > r * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "pqftl: round " << round() << " violates |v| <= R or |y| <= R";
    throw ValidationError(msg.str());
  }
  const int t = round();
  const Matrix outer = v * v.transpose();
  const Vector v_hat = v_tree_.Insert(FlattenRowMajor(outer));
  const Vector u_hat = u_tree_.Insert(y * v);
  played_ = SolveNoisy(Unflatten(v_hat), u_hat, t, config_.alpha,
                       config_.solve, r * r / config_.alpha, &info_);
  return played_;
}

PqftlRunResult RunPqftl(std::span<const LossFunction> losses,
                        const PqftlConfig& config, std::uint64_t seed) {
  config.Validate();
  if (losses.size() != static_cast<std::size_t>(config.horizon)) {
    std::ostringstream msg;
    msg << "pqftl: horizon " << config.horizon << " differs from stream length "
        << losses.size();
    throw ValidationError(msg.str());
  }
  PqftlLearner priv(config, seed);
  QftlLearner clean(config.dim, config.alpha);

  PqftlRunResult result;
  result.v_sigma = priv.v_tree().sigma();
  result.u_sigma = priv.u_tree().sigma();
  result.trace.Reserve(losses.size());
  result.min_eigenvalues.reserve(losses.size());
  const double norm_limit = 2.0 * config.bound / config.alpha;

  for (std::size_t i = 0; i < losses.size(); ++i) {
    const LossFunction& loss = losses[i];
    const Vector& played = priv.played();
    const Vector& x = clean.current();
    result.trace.Append(played, loss.Evaluate(played), loss.Evaluate(x),
                        (played - x).norm());
    const int t = static_cast<int>(i) + 1;
    try {
      priv.Step(loss);
      clean.Update(loss);
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << "round " << t << ": " << e.what();
      throw SolverError(msg.str());
    }
    const PqftlStepInfo& info = priv.last_info();
    result.min_eigenvalues.push_back(info.min_eigenvalue);
    if (info.min_eigenvalue < 0.5 * t * config.alpha) ++result.weak_steps;
    if (info.raw_norm > norm_limit) ++result.norm_violations;
    if (info.clamped) ++result.clamped_steps;
    result.max_raw_norm = std::max(result.max_raw_norm, info.raw_norm);
  }
  // With C = R^d the hindsight optimum is the closed-form x_{T+1}.
  result.trace.SetComparator(losses, clean.current());
  return result;
}

}  // namespace dpocp
