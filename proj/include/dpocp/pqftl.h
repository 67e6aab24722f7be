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

#ifndef DPOCP_PQFTL_H_
#define DPOCP_PQFTL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpocp/loss.h"
#include "dpocp/random.h"
#include "dpocp/regret.h"
#include "dpocp/treesum.h"
#include "dpocp/types.h"

namespace dpocp {

// How the noisy system (t alpha I + Vhat) x = uhat is solved.
enum class PqftlSolve {
  // Cholesky; on failure clamp the eigenvalues of the system at
  // 1e-9 t alpha. Unbounded output.
  kClampFloor,
  // Replace Vhat by its projection onto the PSD cone, solve, then project x
  // onto the ball of radius R^2/alpha, which holds every clean iterate.
  // Both steps only post-process the private sums.
  kPsdBall,
};

struct PqftlConfig {
  int dim = 10;
  int horizon = 4;  // T >= 4
  double alpha = 1.0;
  double bound = 1.0;  // R: |v_t| <= R and |y_t| <= R
  double eps = 1.0;
  double delta = 0.01;
  // Norm bound for the y_t v_t tree. Defaults to R^2, a true bound.
  std::optional<double> u_bound;
  // Zero-noise override for both trees (eps = infinity test mode).
  std::optional<double> sigma_override;
  PqftlSolve solve = PqftlSolve::kPsdBall;
  bool retain_tree_nodes = false;

  void Validate() const;
};

// Per-step diagnostics.
struct PqftlStepInfo {
  double min_eigenvalue = 0.0;  // of symmetrized t alpha I + Vhat_t
  double raw_norm = 0.0;        // |xhat_{t+1}| before any ball projection
  bool clamped = false;         // the eigenvalue floor or PSD cut was active
};

// Private quadratic FTL: two streaming trees, each with budget
// (eps/2, delta/2), feed the closed-form solve. The iterate only reads the
// noisy tree outputs.
class PqftlLearner {
 public:
  PqftlLearner(const PqftlConfig& config, std::uint64_t seed);

  int round() const { return v_tree_.count() + 1; }
  const Vector& played() const { return played_; }
  const PqftlConfig& config() const { return config_; }
  const SumTree& v_tree() const { return v_tree_; }
  const SumTree& u_tree() const { return u_tree_; }
  const PqftlStepInfo& last_info() const { return info_; }

  // Observes the quadratic f_t = 0.5 (y - v'x)^2 + (alpha/2)|x|^2 and
  // returns xhat_{t+1}.
  const Vector& Step(const LossFunction& loss);

  // Solve used by Step, exposed for recomputation from dumped sums.
  static Vector SolveNoisy(const Matrix& v_hat, const Vector& u_hat, int t,
                           double alpha, PqftlSolve mode, double radius,
                           PqftlStepInfo* info);

 private:
  PqftlConfig config_;
  SumTree v_tree_;
  SumTree u_tree_;
  Vector played_;
  PqftlStepInfo info_;
};

struct PqftlRunResult {
  LearnerTrace trace;
  double v_sigma = 0.0;
  double u_sigma = 0.0;
  // Steps with lambda_min(t alpha I + Vhat_t) < t alpha / 2.
  int weak_steps = 0;
  // Steps whose unprojected iterate exceeded 2R/alpha.
  int norm_violations = 0;
  int clamped_steps = 0;
  double max_raw_norm = 0.0;
  std::vector<double> min_eigenvalues;
};

// Full run over a quadratic stream of length config.horizon. The trace's
// non-private column is closed-form QFTL on the same stream, its noise column
// is |xhat_t - x_t|, and the comparator is the exact hindsight optimum.
PqftlRunResult RunPqftl(std::span<const LossFunction> losses,
                        const PqftlConfig& config, std::uint64_t seed);

}  // namespace dpocp

#endif  // DPOCP_PQFTL_H_
