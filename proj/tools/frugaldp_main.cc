//
// Copyright 2025 The FrugalDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frugaldp/experiment.h"

namespace {

using frugaldp::AccuracyReport;
using frugaldp::DistributionSpec;
using frugaldp::ExperimentConfig;
using frugaldp::ExperimentResult;
using frugaldp::FormatDouble;
using frugaldp::GeneratedStream;
using frugaldp::InitPolicy;
using frugaldp::PrivacySpec;
using frugaldp::RunExperiment;
using frugaldp::SensitivityProbe;
using frugaldp::ThroughputBench;
using frugaldp::WriteCsv;
using frugaldp::WriteStreamFile;

constexpr std::uint64_t kDeskScaleN = 1'000'000;
constexpr std::uint64_t kFullScaleN = 10'000'000;

// Common run/sweep flags, at the benchmark defaults.
struct RunFlags {
  std::string dist = "normal";
  std::vector<double> dist_params;
  std::uint64_t n = 0;  // 0 = pick desk/full default
  double q = 0.99;
  std::string mech = "laplace";
  double epsilon = 1.0;
  double delta = 0.04;
  double rho = 1.0;
  int reps = 10;
  std::uint64_t seed = 1;
  int digits = 0;
  std::string init = "zero";
  std::uint64_t oracle_cap = 10'000'000;
  std::string input;
  std::string out;
  bool full = false;
  int jobs = 1;
};

void AddRunFlags(CLI::App* cmd, RunFlags* flags, bool with_input) {
  cmd->add_option("--dist", flags->dist,
                  "distribution: d1..d8 or a family name");
  cmd->add_option("--dist-params", flags->dist_params,
                  "override distribution parameters (one or two values)")
      ->delimiter(',')
      ->expected(1, 2);
  cmd->add_option("--n", flags->n, "stream length (default 1e6; 1e7 with --full)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--q", flags->q, "tracked quantile in [0,1]");
  cmd->add_option("--mech", flags->mech, "mechanism: laplace|gauss|zcdp")
      ->check(CLI::IsMember({"laplace", "gauss", "zcdp"}));
  cmd->add_option("--epsilon", flags->epsilon, "privacy budget epsilon");
  cmd->add_option("--delta", flags->delta, "failure probability delta");
  cmd->add_option("--rho", flags->rho, "zCDP budget rho");
  cmd->add_option("--reps", flags->reps, "repetitions to average")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags->seed, "master seed");
  cmd->add_option("--digits", flags->digits, "quantization digits");
  cmd->add_option("--init", flags->init, "estimator init: zero|first")
      ->check(CLI::IsMember({"zero", "first"}));
  cmd->add_option("--oracle-cap", flags->oracle_cap,
                  "max n for exact oracle scoring");
  if (with_input) {
    cmd->add_option("--input", flags->input,
                    "replay a stream file instead of synthesizing");
  }
  cmd->add_option("--out", flags->out, "CSV output path (default: stdout)");
  cmd->add_flag("--full", flags->full, "full-scale defaults (n = 1e7)");
  cmd->add_option("--jobs", flags->jobs, "parallel repetition workers")
      ->check(CLI::PositiveNumber);
}

DistributionSpec MakeDist(const RunFlags& flags) {
  DistributionSpec dist = DistributionSpec::FromLabel(flags.dist);
  if (!flags.dist_params.empty()) dist.a = flags.dist_params[0];
  if (flags.dist_params.size() > 1) dist.b = flags.dist_params[1];
  dist.Validate();
  return dist;
}

PrivacySpec MakeMechanism(const RunFlags& flags) {
  if (flags.mech == "laplace") return PrivacySpec::Laplace(flags.epsilon);
  if (flags.mech == "gauss") {
    return PrivacySpec::Gaussian(flags.epsilon, flags.delta);
  }
  return PrivacySpec::Zcdp(flags.rho);
}

ExperimentConfig MakeConfig(const RunFlags& flags) {
  ExperimentConfig config;
  config.dist = MakeDist(flags);
  config.n = flags.n != 0 ? flags.n : (flags.full ? kFullScaleN : kDeskScaleN);
  config.q = flags.q;
  config.mechanism = MakeMechanism(flags);
  config.reps = flags.reps;
  config.master_seed = flags.seed;
  config.scheme.digits = flags.digits;
  config.init_policy =
      flags.init == "first" ? InitPolicy::kFirstItem : InitPolicy::kZero;
  config.oracle_cap = flags.oracle_cap;
  config.input = flags.input;
  config.Validate();
  return config;
}

void EmitCsv(const std::string& out_path, const std::string& csv) {
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + out_path);
  }
  out << csv;
  if (!out) {
    throw std::runtime_error("failed writing output file: " + out_path);
  }
}

void WarnIfOracleSkipped(const ExperimentResult& result) {
  if (!result.records.empty() && result.records.front().oracle_skipped) {
    std::cerr << "warning: n exceeds the oracle cap; "
                 "true-quantile and error columns are blank\n";
  }
}

int DoRun(const RunFlags& flags) {
  const auto result = RunExperiment(MakeConfig(flags), flags.jobs);
  WarnIfOracleSkipped(result);
  std::ostringstream os;
  WriteCsv(os, result);
  EmitCsv(flags.out, os.str());
  return 0;
}

int DoSweep(RunFlags flags, const std::string& param,
            const std::vector<std::string>& values, bool mech_given) {
  if (values.empty()) {
    throw std::invalid_argument("sweep needs at least one value");
  }
  // Each figure sweeps the parameter its mechanism owns; pick the matching
  // mechanism unless one was asked for explicitly.
  if (!mech_given) {
    if (param == "delta") flags.mech = "gauss";
    if (param == "rho") flags.mech = "zcdp";
  }
  std::ostringstream os;
  os << frugaldp::kRunCsvHeader << '\n';
  for (const std::string& value : values) {
    RunFlags point = flags;
    if (param == "epsilon") {
      point.epsilon = std::stod(value);
    } else if (param == "delta") {
      point.delta = std::stod(value);
    } else if (param == "rho") {
      point.rho = std::stod(value);
    } else if (param == "q") {
      point.q = std::stod(value);
    } else if (param == "n") {
      point.n = std::stoull(value);
    } else if (param == "dist") {
      point.dist = value;
      point.dist_params.clear();
    } else {
      throw std::invalid_argument("unknown sweep parameter: " + param);
    }
    const auto result = RunExperiment(MakeConfig(point), point.jobs);
    WarnIfOracleSkipped(result);
    std::ostringstream rows;
    WriteCsv(rows, result);
    const std::string with_header = rows.str();
    os << with_header.substr(with_header.find('\n') + 1);
  }
  EmitCsv(flags.out.empty() ? "sweep_" + param + ".csv" : flags.out, os.str());
  return 0;
}

int DoSensitivity(const std::string& dist_label, std::uint64_t n,
                  std::uint64_t trials, std::uint64_t seed) {
  const auto dist = DistributionSpec::FromLabel(dist_label);
  const auto result = SensitivityProbe(dist, n, trials, seed);
  std::cout << "sensitivity probe: dist=" << dist.name() << " n=" << n
            << " trials=" << trials << " seed=" << seed << "\n"
            << "immediate_max_divergence=" << result.immediate_max
            << " (bound_hits=" << result.immediate_bound_hits << "/"
            << result.trials << ")\n"
            << "persistent_max_divergence=" << result.persistent_max << "\n";
  return 0;
}

int DoAccuracy(double beta, std::uint64_t draws, std::uint64_t seed,
               double epsilon, double delta, double rho) {
  const auto rows = AccuracyReport(beta, draws, seed, epsilon, delta, rho);
  std::cout << std::setprecision(6) << std::fixed;
  for (const auto& row : rows) {
    std::cout << row.mechanism << " alpha=" << row.alpha
              << " beta=" << FormatDouble(row.beta);
    if (row.mechanism == "zcdp") {
      std::cout << " rho=" << FormatDouble(row.rho);
    } else {
      std::cout << " epsilon=" << FormatDouble(row.epsilon);
      if (row.mechanism == "gauss") {
        std::cout << " delta=" << FormatDouble(row.delta);
      }
    }
    std::cout << " one_sided=" << row.one_sided_exceedance
              << " two_sided=" << row.two_sided_exceedance
              << " draws=" << row.draws << "\n";
  }
  std::cout << "zcdp_to_approx_dp epsilon="
            << frugaldp::ZcdpToApproxDpEpsilon(rho, delta)
            << " (rho=" << FormatDouble(rho) << " delta=" << FormatDouble(delta)
            << ")\n";
  return 0;
}

int DoGenerate(const RunFlags& flags) {
  if (flags.out.empty()) {
    throw std::invalid_argument("generate requires --out");
  }
  const std::uint64_t n = flags.n != 0 ? flags.n : kDeskScaleN;
  const auto stream =
      frugaldp::Generate(MakeDist(flags), n,
                         frugaldp::DeriveSeed(flags.seed,
                                              frugaldp::StreamPurpose::kData, 0),
                         {.digits = flags.digits});
  WriteStreamFile(flags.out, stream);
  std::cerr << "wrote " << stream.items.size() << " items to " << flags.out
            << " (saturated: " << stream.saturation_count << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "frugaldp: one-unit-of-memory streaming quantile estimation with "
      "differentially private release"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand(
      "run", "run one experiment and emit per-repetition CSV rows");
  AddRunFlags(run, &run_flags, /*with_input=*/true);

  RunFlags sweep_flags;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep one parameter, all others at their defaults");
  sweep->add_option("--param", sweep_param,
                    "epsilon|delta|rho|q|n|dist")
      ->required()
      ->check(CLI::IsMember({"epsilon", "delta", "rho", "q", "n", "dist"}));
  sweep->add_option("--values", sweep_values, "comma-separated sweep values")
      ->delimiter(',')
      ->required();
  AddRunFlags(sweep, &sweep_flags, /*with_input=*/false);

  std::string sens_dist = "normal";
  std::uint64_t sens_n = 10000;
  std::uint64_t sens_trials = 10000;
  std::uint64_t sens_seed = 1;
  CLI::App* sensitivity = app.add_subcommand(
      "sensitivity", "coupled-coin probe of the release sensitivity bound");
  sensitivity->add_option("--dist", sens_dist, "distribution label");
  sensitivity->add_option("--n", sens_n, "stream length per trial")
      ->check(CLI::PositiveNumber);
  sensitivity->add_option("--trials", sens_trials, "number of trials")
      ->check(CLI::PositiveNumber);
  sensitivity->add_option("--seed", sens_seed, "master seed");

  double acc_beta = 0.04;
  std::uint64_t acc_draws = 100000;
  std::uint64_t acc_seed = 1;
  double acc_epsilon = 1.0;
  double acc_delta = 0.04;
  double acc_rho = 1.0;
  CLI::App* accuracy = app.add_subcommand(
      "accuracy", "analytic accuracy bounds plus Monte-Carlo exceedance");
  accuracy->add_option("--beta", acc_beta, "violation probability");
  accuracy->add_option("--draws", acc_draws, "Monte-Carlo draws per mechanism")
      ->check(CLI::PositiveNumber);
  accuracy->add_option("--seed", acc_seed, "noise seed");
  accuracy->add_option("--epsilon", acc_epsilon, "privacy budget epsilon");
  accuracy->add_option("--delta", acc_delta, "failure probability delta");
  accuracy->add_option("--rho", acc_rho, "zCDP budget rho");

  RunFlags gen_flags;
  CLI::App* generate = app.add_subcommand(
      "generate", "write a synthetic stream to a replayable file");
  generate->add_option("--dist", gen_flags.dist, "distribution label");
  generate->add_option("--dist-params", gen_flags.dist_params,
                       "override distribution parameters")
      ->delimiter(',')
      ->expected(1, 2);
  generate->add_option("--n", gen_flags.n, "items to write");
  generate->add_option("--seed", gen_flags.seed, "master seed");
  generate->add_option("--digits", gen_flags.digits, "quantization digits");
  generate->add_option("--out", gen_flags.out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return DoRun(run_flags);
    if (sweep->parsed()) {
      return DoSweep(sweep_flags, sweep_param, sweep_values,
                     sweep->count("--mech") > 0);
    }
    if (sensitivity->parsed()) {
      return DoSensitivity(sens_dist, sens_n, sens_trials, sens_seed);
    }
    if (accuracy->parsed()) {
      return DoAccuracy(acc_beta, acc_draws, acc_seed, acc_epsilon, acc_delta,
                        acc_rho);
    }
    if (generate->parsed()) return DoGenerate(gen_flags);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
