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

#include "dpocp/harness.h"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "dpocp/errors.h"
#include "dpocp/offline.h"
#include "dpocp/privacy.h"
#include "dpocp/random.h"

namespace dpocp {

namespace {

constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kSyntheticStream = 10;
constexpr std::uint64_t kSplitStream = 11;

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double ToDouble(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError(key + ": not a number: '" + text + "'");
  }
  return value;
}

long long ToInt(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError(key + ": not an integer: '" + text + "'");
  }
  return value;
}

bool ToBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError(key + ": not a boolean: '" + text + "'");
}

Vector ToVector(const std::string& key, const std::string& text) {
  const std::vector<std::string> parts = Split(text, ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[i] = ToDouble(key, parts[i]);
  return v;
}

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Training stream and held-out rows of one trial.
struct PreparedData {
  std::vector<double> y;
  std::vector<Vector> v;
  std::vector<double> test_y;
  std::vector<Vector> test_v;
  int clipped = 0;
};

PreparedData Prepare(const ExperimentConfig& config, Dataset data,
                     std::uint64_t seed) {
  const std::size_t n = data.size();
  if (n == 0) throw ValidationError("dataset is empty");
  const int d = data.dim();
  if (config.data == "synthetic" && d != config.synthetic.dim) {
    throw ValidationError("dataset dimension mismatch");
  }
  PreparedData out;
  out.clipped = data.clipped;

  if (config.binarize_class != 0) {
    for (double& y : data.y) y = (y == config.binarize_class) ? 1.0 : -1.0;
  }
  if (config.classification()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (data.y[i] != 1.0 && data.y[i] != -1.0) {
        std::ostringstream msg;
        msg << "row " << (i + 1) << ": classification label must be +/-1";
        throw ValidationError(msg.str());
      }
    }
  }
  if (config.minmax_features) {
    Vector lo = data.v[0], hi = data.v[0];
    for (const Vector& v : data.v) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const Vector span = hi - lo;
    for (Vector& v : data.v) {
      for (int j = 0; j < d; ++j) {
        v[j] = span[j] > 0.0 ? (v[j] - lo[j]) / span[j] : 0.0;
      }
    }
  }
  if (config.standardize_target && !config.classification()) {
    const double mean =
        std::accumulate(data.y.begin(), data.y.end(), 0.0) / n;
    double var = 0.0;
    for (double y : data.y) var += (y - mean) * (y - mean);
    const double sd = std::sqrt(var / n);
    for (double& y : data.y) y = sd > 0.0 ? (y - mean) / sd : 0.0;
  }
  const double r = config.bound;
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = data.v[i].norm();
    if (norm > r) data.v[i] *= r / norm;
    if (!config.classification() && std::abs(data.y[i]) > r) {
      data.y[i] = std::clamp(data.y[i], -r, r);
      ++out.clipped;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t n_test = 0;
  if (config.classification()) {
    Rng split = MakeRng(seed, kSplitStream);
    std::shuffle(order.begin(), order.end(), split);
    n_test = static_cast<std::size_t>(
        std::floor(config.test_fraction.value_or(0.1) * n));
  }
  const std::size_t n_train = n - n_test;
  if (n_train < 2) throw ValidationError("fewer than 2 training rows");
  std::size_t horizon = config.horizon > 0 ? config.horizon : n_train;
  if (horizon > n_train) {
    std::ostringstream msg;
    msg << "T = " << horizon << " exceeds the " << n_train
        << " available training rows";
    throw ValidationError(msg.str());
  }
  for (std::size_t i = 0; i < horizon; ++i) {
    out.y.push_back(data.y[order[i]]);
    out.v.push_back(std::move(data.v[order[i]]));
  }
  for (std::size_t i = n_train; i < n; ++i) {
    out.test_y.push_back(data.y[order[i]]);
    out.test_v.push_back(std::move(data.v[order[i]]));
  }
  return out;
}

std::vector<LossFunction> BuildLosses(const ExperimentConfig& config,
                                      const PreparedData& data, double alpha) {
  std::vector<LossFunction> losses;
  losses.reserve(data.y.size());
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    switch (config.loss) {
      case LossKind::kQuadratic:
        losses.push_back(LossFunction::Quadratic(data.y[i], data.v[i], alpha));
        break;
      case LossKind::kLogistic:
        losses.push_back(LossFunction::Logistic(data.y[i], data.v[i], alpha));
        break;
      case LossKind::kHinge:
        losses.push_back(LossFunction::Hinge(data.y[i], data.v[i], alpha));
        break;
    }
  }
  return losses;
}

ConvexSet ResolveSet(const ExperimentConfig& config, int dim) {
  const std::string& s = config.set;
  if (s == "auto") {
    if (config.algo == Algo::kQftl || config.algo == Algo::kPqftl ||
        config.algo == Algo::kPol) {
      return ConvexSet::AllSpace(dim);
    }
    return ConvexSet::L2Ball(dim, 10.0 * config.synthetic.xstar_norm);
  }
  if (s == "all") return ConvexSet::AllSpace(dim);
  const std::vector<std::string> parts = Split(s, ':');
  if (parts.size() == 2 && parts[0] == "ball") {
    return ConvexSet::L2Ball(dim, ToDouble("set", parts[1]));
  }
  if (parts.size() == 3 && parts[0] == "box") {
    return ConvexSet::Box(Vector::Constant(dim, ToDouble("set", parts[1])),
                          Vector::Constant(dim, ToDouble("set", parts[2])));
  }
  throw ValidationError("set: expected auto, all, ball:<r> or box:<lo>:<hi>");
}

LearnerKind BaseKind(Algo algo) {
  switch (algo) {
    case Algo::kIgd:
    case Algo::kPigd:
      return LearnerKind::kIgd;
    case Algo::kGiga:
    case Algo::kPgiga:
      return LearnerKind::kGiga;
    case Algo::kFtl:
    case Algo::kPftl:
      return LearnerKind::kFtl;
    default:
      return LearnerKind::kQftl;
  }
}

double Accuracy(const std::vector<double>& y, const std::vector<Vector>& v,
                const Vector& x) {
  if (y.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double predicted = v[i].dot(x) >= 0.0 ? 1.0 : -1.0;
    if (predicted == y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

bool AllSmooth(const std::vector<LossFunction>& losses) {
  return std::all_of(losses.begin(), losses.end(),
                     [](const LossFunction& f) { return f.smooth(); });
}

TrialResult RunPrepared(const ExperimentConfig& config,
                        const PreparedData& data, std::uint64_t seed) {
  const int dim = static_cast<int>(data.v.front().size());
  const int horizon = static_cast<int>(data.y.size());
  const ConvexSet set = ResolveSet(config, dim);
  TrialResult result;
  Vector point_private;
  Vector point_clean;

  switch (config.algo) {
    case Algo::kIgd:
    case Algo::kGiga:
    case Algo::kFtl: {
      const std::vector<LossFunction> losses =
          BuildLosses(config, data, config.alpha);
      const LossConstants k = DeriveConstants(losses, set);
      LearnerParams params;
      params.alpha = k.alpha;
      params.grad_lipschitz = k.grad_lipschitz;
      Rng init = MakeRng(seed, kInitStream);
      auto learner = MakeLearner(BaseKind(config.algo), set, params,
                                 InitialPoint(set, init));
      result.trace.Reserve(losses.size());
      for (const LossFunction& loss : losses) {
        const double cost = loss.Evaluate(learner->current());
        result.trace.Append(learner->current(), cost, cost, 0.0);
        learner->Update(loss);
      }
      point_private = point_clean = learner->current();
      if (AllSmooth(losses)) {
        result.trace.SetComparator(losses, OfflineOptimum(losses, set));
      }
      break;
    }
    case Algo::kPigd:
    case Algo::kPgiga:
    case Algo::kPftl: {
      const std::vector<LossFunction> losses =
          BuildLosses(config, data, config.alpha);
      LossConstants k = DeriveConstants(losses, set);
      if (config.lipschitz) k.lipschitz = k.grad_bound = *config.lipschitz;
      PrivacyBudget budget{config.eps, config.delta, horizon};
      PrivateRunOptions options;
      if (config.zero_noise) options.beta_override = 0.0;
      options.compute_comparator = AllSmooth(losses);
      PrivateRunResult run = RunPrivate(BaseKind(config.algo), losses, set,
                                        budget, k, seed, options);
      result.trace = std::move(run.trace);
      point_private = run.final_played;
      point_clean = run.final_clean;
      break;
    }
    case Algo::kQftl: {
      if (set.bounded()) throw ValidationError("qftl runs on the whole space");
      if (config.loss != LossKind::kQuadratic) {
        throw ValidationError("qftl needs quadratic losses");
      }
      const std::vector<LossFunction> losses =
          BuildLosses(config, data, config.alpha);
      QftlLearner learner(dim, config.alpha);
      result.trace.Reserve(losses.size());
      for (const LossFunction& loss : losses) {
        const double cost = loss.Evaluate(learner.current());
        result.trace.Append(learner.current(), cost, cost, 0.0);
        learner.Update(loss);
      }
      result.trace.SetComparator(losses, learner.current());
      point_private = point_clean = learner.current();
      break;
    }
    case Algo::kPqftl: {
      if (set.bounded()) throw ValidationError("pqftl runs on the whole space");
      if (config.loss != LossKind::kQuadratic) {
        throw ValidationError("pqftl needs quadratic losses");
      }
      const std::vector<LossFunction> losses =
          BuildLosses(config, data, config.alpha);
      PqftlConfig pc;
      pc.dim = dim;
      pc.horizon = horizon;
      pc.alpha = config.alpha;
      pc.bound = config.bound;
      pc.eps = config.eps;
      pc.delta = config.delta;
      pc.u_bound = config.u_bound;
      pc.solve = config.pqftl_solve;
      if (config.zero_noise) pc.sigma_override = 0.0;
      PqftlRunResult run = RunPqftl(losses, pc, seed);
      result.trace = std::move(run.trace);
      break;
    }
    case Algo::kPol: {
      PolConfig pc;
      pc.eps_p = config.eps;
      pc.delta = config.delta;
      pc.eps_g = config.eps_g;
      pc.xstar_norm = config.synthetic.xstar_norm;
      if (config.zero_noise) pc.beta_override = 0.0;
      const std::vector<LossFunction> base = BuildLosses(config, data, 0.0);
      const ConvexSet pol_set = PolSet(set, pc);
      pc.lipschitz = config.lipschitz.value_or(
          DeriveConstants(base, pol_set).lipschitz);
      const PolResult run = RunPol(base, set, pc, seed);
      std::vector<LossFunction> losses;
      losses.reserve(base.size());
      for (const LossFunction& f : base) losses.push_back(f.WithAlpha(run.alpha));
      const double noise = (run.x_hat - run.x_average).norm();
      result.trace.Reserve(losses.size());
      for (const LossFunction& loss : losses) {
        result.trace.Append(run.x_hat, loss.Evaluate(run.x_hat),
                            loss.Evaluate(run.x_average), noise);
      }
      if (AllSmooth(losses)) {
        result.trace.SetComparator(losses, OfflineOptimum(losses, run.set));
      }
      point_private = run.x_hat;
      point_clean = run.x_average;
      break;
    }
  }

  ExperimentSummary& s = result.summary;
  s.horizon = horizon;
  s.clipped = data.clipped;
  s.mean_noise_norm = result.trace.MeanNoiseNorm();
  if (result.trace.has_comparator()) {
    s.avg_regret_private = result.trace.FinalRegretPrivate() / horizon;
    s.avg_regret_nonprivate = result.trace.FinalRegretNonPrivate() / horizon;
  } else {
    s.avg_regret_private = s.avg_regret_nonprivate =
        std::numeric_limits<double>::quiet_NaN();
  }
  if (config.classification() && point_private.size() > 0) {
    s.accuracy_private = Accuracy(data.test_y, data.test_v, point_private);
    s.accuracy_nonprivate = Accuracy(data.test_y, data.test_v, point_clean);
  }
  return result;
}

Dataset LoadData(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.data == "synthetic") {
    SyntheticSpec spec = config.synthetic;
    spec.horizon = config.horizon;
    spec.bound = config.bound;
    return GenerateSynthetic(spec, seed);
  }
  return ReadDatasetCsv(config.data_path);
}

TrialResult RunTrialWith(const ExperimentConfig& config, const Dataset* shared,
                         int trial) {
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);
  try {
    Dataset data = shared != nullptr ? *shared : LoadData(config, seed);
    TrialResult result = RunPrepared(config, Prepare(config, data, seed), seed);
    result.summary.trial = trial;
    return result;
  } catch (const ValidationError& e) {
    throw ValidationError("trial " + std::to_string(trial) + ": " + e.what());
  } catch (const SolverError& e) {
    throw SolverError("trial " + std::to_string(trial) + ": " + e.what());
  }
}

std::string TrialPath(const std::string& path, int trial) {
  std::filesystem::path p(path);
  std::string name = p.stem().string() + ".trial" + std::to_string(trial) +
                     p.extension().string();
  return (p.parent_path() / name).string();
}

}  // namespace

std::map<std::string, std::string> ParseKeyValues(
    std::istream& in, const std::set<std::string>& allowed) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    std::ostringstream where;
    where << "config line " << number << ": ";
    if (eq == std::string::npos) {
      throw ValidationError(where.str() + "expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (!allowed.count(key)) {
      throw ValidationError(where.str() + "unknown key '" + key + "'");
    }
    if (!out.emplace(key, value).second) {
      throw ValidationError(where.str() + "repeated key '" + key + "'");
    }
  }
  return out;
}

void SyntheticSpec::Validate() const {
  if (dim < 1) throw ValidationError("synthetic: dim must be >= 1");
  if (horizon < 1) throw ValidationError("synthetic: T must be >= 1");
  if (!(bound > 0.0)) throw ValidationError("synthetic: R must be > 0");
  if (!(noise_std >= 0.0)) {
    throw ValidationError("synthetic: noise_std must be >= 0");
  }
  if (!(xstar_norm > 0.0)) {
    throw ValidationError("synthetic: xstar_norm must be > 0");
  }
  if (features != "gaussian" && features != "constant") {
    throw ValidationError("synthetic: features must be gaussian or constant");
  }
  if (xstar && xstar->size() != dim) {
    throw ValidationError("synthetic: xstar length differs from dim");
  }
}

SyntheticSpec ParseSyntheticSpec(std::istream& in) {
  const auto kv = ParseKeyValues(
      in, {"dim", "T", "R", "noise_std", "xstar_norm", "features", "xstar"});
  SyntheticSpec spec;
  for (const auto& [key, value] : kv) {
    if (key == "dim") spec.dim = static_cast<int>(ToInt(key, value));
    if (key == "T") spec.horizon = static_cast<int>(ToInt(key, value));
    if (key == "R") spec.bound = ToDouble(key, value);
    if (key == "noise_std") spec.noise_std = ToDouble(key, value);
    if (key == "xstar_norm") spec.xstar_norm = ToDouble(key, value);
    if (key == "features") spec.features = value;
    if (key == "xstar") spec.xstar = ToVector(key, value);
  }
  spec.Validate();
  return spec;
}

SyntheticSpec LoadSyntheticSpec(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ParseSyntheticSpec(in);
}

Dataset GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.Validate();
  Rng rng = MakeRng(seed, kSyntheticStream);
  Dataset data;
  if (spec.xstar) {
    data.xstar = *spec.xstar;
  } else {
    Vector dir = GaussianVector(rng, spec.dim, 1.0);
    data.xstar = dir.normalized() * spec.xstar_norm;
  }
  const Vector& xstar = *data.xstar;
  std::normal_distribution<double> noise(0.0, 1.0);
  data.y.reserve(spec.horizon);
  data.v.reserve(spec.horizon);
  for (int t = 0; t < spec.horizon; ++t) {
    Vector v = spec.features == "gaussian" ? GaussianVector(rng, spec.dim, 1.0)
                                           : Vector::Ones(spec.dim);
    const double norm = v.norm();
    if (norm > spec.bound) v *= spec.bound / norm;
    double y = v.dot(xstar) + spec.noise_std * noise(rng);
    if (std::abs(y) > spec.bound) {
      y = std::clamp(y, -spec.bound, spec.bound);
      ++data.clipped;
    }
    data.y.push_back(y);
    data.v.push_back(std::move(v));
  }
  return data;
}

void WriteDatasetCsv(const Dataset& data, std::ostream& out) {
  const int d = data.dim();
  std::string line = "y";
  for (int j = 1; j <= d; ++j) line += ",v" + std::to_string(j);
  out << line << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    line = Fmt(data.y[i]);
    for (int j = 0; j < d; ++j) line += "," + Fmt(data.v[i][j]);
    out << line << '\n';
  }
}

void WriteDatasetCsv(const Dataset& data, const std::string& path) {
  std::ofstream out = OpenOut(path);
  WriteDatasetCsv(data, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset ReadDatasetCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset: empty file");
  const std::vector<std::string> header = Split(Trim(line), ',');
  if (header.size() < 2 || Trim(header[0]) != "y") {
    throw ValidationError("dataset: header must be y,v1,...,vd");
  }
  const int d = static_cast<int>(header.size()) - 1;
  for (int j = 1; j <= d; ++j) {
    if (Trim(header[j]) != "v" + std::to_string(j)) {
      throw ValidationError("dataset: header must be y,v1,...,vd");
    }
  }
  Dataset data;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    line = Trim(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = Split(line, ',');
    const std::string where = "dataset line " + std::to_string(number);
    if (static_cast<int>(fields.size()) != d + 1) {
      throw ValidationError(where + ": expected " + std::to_string(d + 1) +
                            " fields");
    }
    data.y.push_back(ToDouble(where, fields[0]));
    Vector v(d);
    for (int j = 0; j < d; ++j) v[j] = ToDouble(where, fields[j + 1]);
    data.v.push_back(std::move(v));
  }
  if (data.size() == 0) throw ValidationError("dataset: no rows");
  return data;
}

Dataset ReadDatasetCsv(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadDatasetCsv(in);
}

Algo ParseAlgo(const std::string& name) {
  static const std::map<std::string, Algo> kNames = {
      {"igd", Algo::kIgd},   {"pigd", Algo::kPigd},   {"giga", Algo::kGiga},
      {"pgiga", Algo::kPgiga}, {"ftl", Algo::kFtl},   {"pftl", Algo::kPftl},
      {"qftl", Algo::kQftl}, {"pqftl", Algo::kPqftl}, {"pol", Algo::kPol}};
  auto it = kNames.find(name);
  if (it == kNames.end()) throw ValidationError("unknown algo '" + name + "'");
  return it->second;
}

std::string AlgoName(Algo algo) {
  switch (algo) {
    case Algo::kIgd: return "igd";
    case Algo::kPigd: return "pigd";
    case Algo::kGiga: return "giga";
    case Algo::kPgiga: return "pgiga";
    case Algo::kFtl: return "ftl";
    case Algo::kPftl: return "pftl";
    case Algo::kQftl: return "qftl";
    case Algo::kPqftl: return "pqftl";
    case Algo::kPol: return "pol";
  }
  return "unknown";
}

bool IsPrivate(Algo algo) {
  return algo == Algo::kPigd || algo == Algo::kPgiga || algo == Algo::kPftl ||
         algo == Algo::kPqftl || algo == Algo::kPol;
}

LossKind ParseLossKind(const std::string& name) {
  if (name == "quadratic") return LossKind::kQuadratic;
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "hinge") return LossKind::kHinge;
  throw ValidationError("unknown loss '" + name + "'");
}

void ExperimentConfig::Validate() const {
  if (horizon < 0) throw ValidationError("T must be >= 0");
  if (!(eps > 0.0)) throw ValidationError("eps must be > 0");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(bound > 0.0)) throw ValidationError("R must be > 0");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (threads < 0) throw ValidationError("threads must be >= 0");
  if (!(eps_g > 0.0)) throw ValidationError("eps_g must be > 0");
  if (lipschitz && !(*lipschitz > 0.0)) {
    throw ValidationError("lipschitz must be > 0");
  }
  if (data == "synthetic") {
    if (horizon < 2) throw ValidationError("synthetic data needs T >= 2");
    if (classification()) {
      throw ValidationError("synthetic data is regression; use quadratic loss");
    }
    SyntheticSpec spec = synthetic;
    spec.horizon = horizon;
    spec.bound = bound;
    spec.Validate();
  } else if (data == "csv") {
    if (data_path.empty()) throw ValidationError("data = csv needs data_path");
  } else {
    throw ValidationError("data must be synthetic or csv");
  }
  if (test_fraction) {
    if (!classification()) {
      throw ValidationError("test_fraction applies to classification only");
    }
    if (!(*test_fraction >= 0.0) || !(*test_fraction < 1.0)) {
      throw ValidationError("test_fraction must lie in [0, 1)");
    }
  }
  if (binarize_class != 0 && !classification()) {
    throw ValidationError("binarize_class applies to classification only");
  }
}

ExperimentConfig ParseExperimentConfig(std::istream& in) {
  const auto kv = ParseKeyValues(
      in, {"algo", "T", "dim", "eps", "delta", "alpha", "R", "seed", "trials",
           "set", "data", "data_path", "loss", "noise_std", "xstar_norm",
           "features", "xstar", "zero_noise", "test_fraction",
           "binarize_class", "minmax_features", "standardize_target", "eps_g",
           "lipschitz", "pqftl_solve", "u_bound", "threads", "output"});
  ExperimentConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "algo") c.algo = ParseAlgo(value);
    if (key == "T") c.horizon = static_cast<int>(ToInt(key, value));
    if (key == "dim") c.synthetic.dim = static_cast<int>(ToInt(key, value));
    if (key == "eps") c.eps = ToDouble(key, value);
    if (key == "delta") c.delta = ToDouble(key, value);
    if (key == "alpha") c.alpha = ToDouble(key, value);
    if (key == "R") c.bound = ToDouble(key, value);
    if (key == "seed") c.seed = static_cast<std::uint64_t>(ToInt(key, value));
    if (key == "trials") c.trials = static_cast<int>(ToInt(key, value));
    if (key == "set") c.set = value;
    if (key == "data") c.data = value;
    if (key == "data_path") c.data_path = value;
    if (key == "loss") c.loss = ParseLossKind(value);
    if (key == "noise_std") c.synthetic.noise_std = ToDouble(key, value);
    if (key == "xstar_norm") c.synthetic.xstar_norm = ToDouble(key, value);
    if (key == "features") c.synthetic.features = value;
    if (key == "xstar") c.synthetic.xstar = ToVector(key, value);
    if (key == "zero_noise") c.zero_noise = ToBool(key, value);
    if (key == "test_fraction") c.test_fraction = ToDouble(key, value);
    if (key == "binarize_class") {
      c.binarize_class = static_cast<int>(ToInt(key, value));
    }
    if (key == "minmax_features") c.minmax_features = ToBool(key, value);
    if (key == "standardize_target") c.standardize_target = ToBool(key, value);
    if (key == "eps_g") c.eps_g = ToDouble(key, value);
    if (key == "lipschitz") c.lipschitz = ToDouble(key, value);
    if (key == "pqftl_solve") {
      if (value == "psd_ball") {
        c.pqftl_solve = PqftlSolve::kPsdBall;
      } else if (value == "clamp_floor") {
        c.pqftl_solve = PqftlSolve::kClampFloor;
      } else {
        throw ValidationError("pqftl_solve must be psd_ball or clamp_floor");
      }
    }
    if (key == "u_bound") c.u_bound = ToDouble(key, value);
    if (key == "threads") c.threads = static_cast<int>(ToInt(key, value));
    if (key == "output") c.output = value;
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ParseExperimentConfig(in);
}

TrialResult RunTrial(const ExperimentConfig& config, int trial) {
  config.Validate();
  return RunTrialWith(config, nullptr, trial);
}

std::vector<TrialResult> RunTrialsSerial(const ExperimentConfig& config) {
  config.Validate();
  std::optional<Dataset> shared;
  if (config.data == "csv") shared = ReadDatasetCsv(config.data_path);
  std::vector<TrialResult> results;
  results.reserve(config.trials);
  for (int k = 0; k < config.trials; ++k) {
    results.push_back(
        RunTrialWith(config, shared ? &*shared : nullptr, k));
  }
  return results;
}

std::vector<TrialResult> RunTrialsParallel(const ExperimentConfig& config) {
  config.Validate();
  std::optional<Dataset> shared;
  if (config.data == "csv") shared = ReadDatasetCsv(config.data_path);
  const Dataset* data = shared ? &*shared : nullptr;
  std::vector<TrialResult> results(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int k = 0; k < config.trials; ++k) {
    try {
      results[k] = RunTrialWith(config, data, k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

void WriteTraceCsv(const LearnerTrace& trace, std::ostream& out) {
  out << "t,cost_private,cost_nonprivate,noise_norm,cum_regret_private,"
         "cum_regret_nonprivate\n";
  const bool regret = trace.has_comparator();
  const std::string nan = "nan";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << (i + 1) << ',' << Fmt(trace.cost_private()[i]) << ','
        << Fmt(trace.cost_nonprivate()[i]) << ','
        << Fmt(trace.noise_norm()[i]) << ','
        << (regret ? Fmt(trace.CumRegretPrivate(i)) : nan) << ','
        << (regret ? Fmt(trace.CumRegretNonPrivate(i)) : nan) << '\n';
  }
}

std::string FormatSummary(const ExperimentConfig& config,
                          const ExperimentSummary& s) {
  std::ostringstream out;
  out << "summary algo=" << AlgoName(config.algo) << " trial=" << s.trial
      << " T=" << s.horizon << " avg_regret_private=" << Fmt(s.avg_regret_private)
      << " avg_regret_nonprivate=" << Fmt(s.avg_regret_nonprivate)
      << " mean_noise_norm=" << Fmt(s.mean_noise_norm);
  if (s.accuracy_private) {
    out << " accuracy_private=" << Fmt(*s.accuracy_private)
        << " accuracy_nonprivate=" << Fmt(*s.accuracy_nonprivate);
  }
  out << " clipped=" << s.clipped;
  return out.str();
}

std::vector<ExperimentSummary> RunExperiment(const ExperimentConfig& config,
                                             const std::string& out_path,
                                             std::ostream& log) {
  if (config.algo == Algo::kPol) {
    log << "warning: pol utility assumes |x*| <= xstar_norm = "
        << config.synthetic.xstar_norm
        << "; privacy holds for the stated sensitivity only\n";
  }
  std::vector<TrialResult> results = RunTrialsParallel(config);
  std::vector<ExperimentSummary> summaries;
  for (const TrialResult& r : results) {
    const std::string path =
        config.trials > 1 ? TrialPath(out_path, r.summary.trial) : out_path;
    std::ofstream out = OpenOut(path);
    WriteTraceCsv(r.trace, out);
    if (!out) throw std::runtime_error("write failed: " + path);
    if (r.summary.clipped > 0) {
      log << "note: trial " << r.summary.trial << " clipped "
          << r.summary.clipped << " targets to |y| <= R\n";
    }
    log << FormatSummary(config, r.summary) << '\n';
    summaries.push_back(r.summary);
  }
  return summaries;
}

double SensitivityProbe(LearnerKind kind, int dim, int horizon, int trials,
                        std::uint64_t seed, LossKind loss) {
  if (kind == LearnerKind::kQftl) {
    throw ValidationError("probe supports igd, giga and ftl");
  }
  if (dim < 1 || horizon < 1 || trials < 1) {
    throw ValidationError("probe: dim, T and trials must be >= 1");
  }
  if (kind == LearnerKind::kGiga && loss == LossKind::kHinge) {
    throw ValidationError("probe: giga needs a smooth loss");
  }
  const double alpha = 1.0;
  const ConvexSet set = ConvexSet::L2Ball(dim, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = MakeRng(seed, static_cast<std::uint64_t>(trial));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.2, 1.0);
    auto draw = [&]() {
      Vector v = GaussianVector(rng, dim, 1.0);
      v *= scale(rng) / v.norm();
      const double y = unit(rng);
      switch (loss) {
        case LossKind::kQuadratic:
          return LossFunction::Quadratic(y, std::move(v), alpha);
        case LossKind::kLogistic:
          return LossFunction::Logistic(y >= 0 ? 1.0 : -1.0, std::move(v),
                                        alpha);
        case LossKind::kHinge:
          break;
      }
      return LossFunction::Hinge(y >= 0 ? 1.0 : -1.0, std::move(v), alpha);
    };
    std::vector<LossFunction> a;
    for (int t = 0; t < horizon; ++t) a.push_back(draw());
    std::vector<LossFunction> b = a;
    const int tau = std::uniform_int_distribution<int>(0, horizon - 1)(rng);
    b[tau] = draw();

    std::vector<LossFunction> both = a;
    both.push_back(b[tau]);
    const LossConstants k = DeriveConstants(both, set);
    const double lambda = SensitivityProfile::For(kind, k).lambda;
    LearnerParams params;
    params.alpha = alpha;
    params.grad_lipschitz = k.grad_lipschitz;
    const Vector x1 = set.SampleUniform(rng);
    auto la = MakeLearner(kind, set, params, x1);
    auto lb = MakeLearner(kind, set, params, x1);
    int burn_in = 1;
    if (const auto* g = dynamic_cast<const GigaLearner*>(la.get())) {
      burn_in = g->burn_in();
    }
    for (int t = 1; t <= horizon; ++t) {
      const Vector& xa = la->Update(a[t - 1]);
      const Vector& xb = lb->Update(b[t - 1]);
      if (t < burn_in) continue;
      worst = std::max(worst, t * (xa - xb).norm() / lambda);
    }
  }
  return worst;
}

}  // namespace dpocp
