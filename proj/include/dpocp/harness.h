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

#ifndef DPOCP_HARNESS_H_
#define DPOCP_HARNESS_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "dpocp/convex_set.h"
#include "dpocp/learners.h"
#include "dpocp/loss.h"
#include "dpocp/pqftl.h"
#include "dpocp/regret.h"
#include "dpocp/types.h"

namespace dpocp {

// `key = value` lines with `#` comments. Unknown or repeated keys are
// rejected with the offending line number.
std::map<std::string, std::string> ParseKeyValues(
    std::istream& in, const std::set<std::string>& allowed);

// ---------------------------------------------------------------------------
// Data.

// Synthetic linear-regression stream: x* fixed per seed, v_t ~ N(0, I) (or
// all-ones with features = "constant") scaled to |v_t| <= R, and
// y_t = v_t'x* + N(0, noise_std^2) clipped to |y_t| <= R.
struct SyntheticSpec {
  int dim = 10;
  int horizon = 100000;
  double bound = 1.0;  // R
  double noise_std = 0.01;
  double xstar_norm = 1.0;
  std::string features = "gaussian";  // or "constant"
  std::optional<Vector> xstar;        // overrides the drawn x*

  void Validate() const;
};

SyntheticSpec ParseSyntheticSpec(std::istream& in);
SyntheticSpec LoadSyntheticSpec(const std::string& path);

struct Dataset {
  std::vector<double> y;
  std::vector<Vector> v;
  std::optional<Vector> xstar;  // known for synthetic data
  int clipped = 0;              // targets clipped to |y| <= R

  std::size_t size() const { return y.size(); }
  int dim() const { return v.empty() ? 0 : static_cast<int>(v[0].size()); }
};

Dataset GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed);

// CSV with header `y,v1,...,vd`; values written with 17 significant digits.
void WriteDatasetCsv(const Dataset& data, std::ostream& out);
void WriteDatasetCsv(const Dataset& data, const std::string& path);
Dataset ReadDatasetCsv(std::istream& in);
Dataset ReadDatasetCsv(const std::string& path);

// ---------------------------------------------------------------------------
// Experiments.

enum class Algo { kIgd, kPigd, kGiga, kPgiga, kFtl, kPftl, kQftl, kPqftl, kPol };

Algo ParseAlgo(const std::string& name);
std::string AlgoName(Algo algo);
bool IsPrivate(Algo algo);
LossKind ParseLossKind(const std::string& name);

struct ExperimentConfig {
  Algo algo = Algo::kPqftl;
  int horizon = 0;  // 0: use every training row
  double eps = 1.0;
  double delta = 0.01;
  double alpha = 1.0;
  double bound = 1.0;  // R
  std::uint64_t seed = 1;
  int trials = 1;
  // "auto" (L2Ball(0, 10 |x*|), or R^d for qftl/pqftl/pol), "all",
  // "ball:<radius>" or "box:<lo>:<hi>".
  std::string set = "auto";
  std::string data = "synthetic";  // or "csv"
  std::string data_path;
  LossKind loss = LossKind::kQuadratic;
  SyntheticSpec synthetic;  // dim, noise_std, xstar_norm, features
  bool zero_noise = false;  // test mode: every mechanism adds no noise
  std::optional<double> test_fraction;  // default 0.1 for classification
  int binarize_class = 0;    // label +1 iff y == class; 0 keeps labels
  bool minmax_features = false;
  bool standardize_target = false;
  double eps_g = 1.0;  // pol only
  std::optional<double> lipschitz;
  PqftlSolve pqftl_solve = PqftlSolve::kPsdBall;
  std::optional<double> u_bound;
  int threads = 0;  // 0: OpenMP default
  std::string output;

  bool classification() const { return loss != LossKind::kQuadratic; }
  void Validate() const;
};

ExperimentConfig ParseExperimentConfig(std::istream& in);
ExperimentConfig LoadExperimentConfig(const std::string& path);

struct ExperimentSummary {
  int trial = 0;
  int horizon = 0;
  double avg_regret_private = 0.0;
  double avg_regret_nonprivate = 0.0;
  double mean_noise_norm = 0.0;
  std::optional<double> accuracy_private;
  std::optional<double> accuracy_nonprivate;
  int clipped = 0;
};

struct TrialResult {
  LearnerTrace trace;
  ExperimentSummary summary;
};

// One trial with its own seed: config.seed + trial.
TrialResult RunTrial(const ExperimentConfig& config, int trial);

// All trials, serially (reference) or across OpenMP threads. Results come
// back in trial order and are identical between the two.
std::vector<TrialResult> RunTrialsSerial(const ExperimentConfig& config);
std::vector<TrialResult> RunTrialsParallel(const ExperimentConfig& config);

void WriteTraceCsv(const LearnerTrace& trace, std::ostream& out);
std::string FormatSummary(const ExperimentConfig& config,
                          const ExperimentSummary& summary);

// Runs every trial and writes the trace CSV to `out_path` (one file per
// trial, suffixed `.trialN`, when trials > 1). Summary lines go to `log`.
std::vector<ExperimentSummary> RunExperiment(const ExperimentConfig& config,
                                             const std::string& out_path,
                                             std::ostream& log);

// Worst normalized sensitivity max_t t |x_{t+1} - x'_{t+1}| / lambda over
// `trials` random neighboring stream pairs on the unit ball (alpha = 1).
// GIGA rounds inside the burn-in are excluded.
double SensitivityProbe(LearnerKind kind, int dim, int horizon, int trials,
                        std::uint64_t seed,
                        LossKind loss = LossKind::kQuadratic);

}  // namespace dpocp

#endif  // DPOCP_HARNESS_H_
