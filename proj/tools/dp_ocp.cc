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

// dp-ocp: data generation, experiment runs and sensitivity probes.
//
//   dp-ocp gen   --spec synth.conf --seed 7 --out data.csv
//   dp-ocp run   --config run.conf --out trace.csv
//   dp-ocp probe --algo igd --dim 3 --T 32 --trials 100 --seed 1
//
// Exit status: 0 on success, 2 on invalid input, 3 on runtime failure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dpocp/errors.h"
#include "dpocp/harness.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int Gen(const std::string& spec_path, std::uint64_t seed,
        const std::string& out) {
  const dpocp::SyntheticSpec spec = dpocp::LoadSyntheticSpec(spec_path);
  const dpocp::Dataset data = dpocp::GenerateSynthetic(spec, seed);
  dpocp::WriteDatasetCsv(data, out);
  if (data.clipped > 0) {
    std::cerr << "note: clipped " << data.clipped << " targets to |y| <= R\n";
  }
  std::cout << "wrote " << data.size() << " rows to " << out << '\n';
  return 0;
}

int Run(const std::string& config_path, std::string out) {
  const dpocp::ExperimentConfig config =
      dpocp::LoadExperimentConfig(config_path);
  if (out.empty()) out = config.output;
  if (out.empty()) throw dpocp::ValidationError("no output path given");
  dpocp::RunExperiment(config, out, std::cout);
  return 0;
}

int Probe(const std::string& algo, int dim, int horizon, int trials,
          std::uint64_t seed, const std::string& loss) {
  dpocp::LearnerKind kind;
  if (algo == "igd") {
    kind = dpocp::LearnerKind::kIgd;
  } else if (algo == "giga") {
    kind = dpocp::LearnerKind::kGiga;
  } else if (algo == "ftl") {
    kind = dpocp::LearnerKind::kFtl;
  } else {
    throw dpocp::ValidationError("probe algo must be igd, giga or ftl");
  }
  const double ratio = dpocp::SensitivityProbe(
      kind, dim, horizon, trials, seed, dpocp::ParseLossKind(loss));
  std::printf("max_normalized_sensitivity=%.17g\n", ratio);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private online convex programming"};
  app.require_subcommand(1);

  std::string spec_path, gen_out;
  std::uint64_t gen_seed = 1;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--spec", spec_path, "Synthetic spec file")->required();
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("--out", gen_out, "Output CSV")->required();

  std::string config_path, run_out;
  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", config_path, "Experiment config")->required();
  run->add_option("--out", run_out, "Trace CSV (overrides config output)");

  std::string algo = "igd", loss = "quadratic";
  int dim = 3, horizon = 32, trials = 100;
  std::uint64_t probe_seed = 1;
  CLI::App* probe = app.add_subcommand("probe", "Sensitivity probe");
  probe->add_option("--algo", algo, "igd, giga or ftl");
  probe->add_option("--dim", dim, "Dimension");
  probe->add_option("--T", horizon, "Stream length");
  probe->add_option("--trials", trials, "Neighbor pairs");
  probe->add_option("--seed", probe_seed, "Seed");
  probe->add_option("--loss", loss, "quadratic, logistic or hinge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen) return Gen(spec_path, gen_seed, gen_out);
    if (*run) return Run(config_path, run_out);
    if (*probe) return Probe(algo, dim, horizon, trials, probe_seed, loss);
  } catch (const dpocp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
