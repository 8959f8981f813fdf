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

#ifndef FRUGALDP_EXPERIMENT_H_
#define FRUGALDP_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "frugaldp/distributions.h"
#include "frugaldp/estimator.h"
#include "frugaldp/mechanisms.h"

namespace frugaldp {

// One experiment: stream source, tracked quantile, release mechanism,
// repetition count, and seeds. Defaults are the benchmark defaults
// (q = 0.99, n = 10M, epsilon = 1, delta = 0.04, rho = 1, 10 repetitions);
// the CLI substitutes n = 1e6 for desk-scale runs unless --full is given.
struct ExperimentConfig {
  DistributionSpec dist = DistributionSpec::Normal();
  std::uint64_t n = 10'000'000;
  double q = 0.99;
  PrivacySpec mechanism = PrivacySpec::Laplace(1.0);
  int reps = 10;
  std::uint64_t master_seed = 1;
  QuantizationScheme scheme;
  InitPolicy init_policy = InitPolicy::kZero;
  // Exact scoring materializes the stream; runs longer than this cap skip
  // the oracle (with a warning) instead of failing.
  std::uint64_t oracle_cap = 10'000'000;
  // Optional replay file (newline-delimited decimal numbers, quantized on
  // ingest). When set, `dist` is ignored and n is taken from the file.
  std::string input;

  void Validate() const;
};

// One repetition's outcome. Oracle-derived fields are NaN (blank in CSV)
// when scoring was skipped.
struct RunRecord {
  static constexpr int kMeanRep = -1;

  std::string dataset;
  std::string mechanism;
  double q = 0.0;
  std::uint64_t n = 0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  int rep = 0;
  std::uint64_t seed = 0;  // the experiment's master seed
  double true_quantile = std::numeric_limits<double>::quiet_NaN();
  double raw_estimate = 0.0;
  double private_estimate = 0.0;
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  double rank_error_fraction = std::numeric_limits<double>::quiet_NaN();
  double updates_per_sec = 0.0;
  // double, so the aggregate row can carry a fractional mean.
  double saturation_count = 0.0;

  bool oracle_skipped = false;  // warning flag; not a CSV column
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // one per repetition, in rep order
  RunRecord mean;                  // arithmetic mean of the per-rep rows
};

// Runs config.reps independent repetitions. Every repetition derives its own
// data, coin and noise substreams from (master_seed, rep), so output is
// identical whether repetitions run serially or with jobs > 1 workers
// (records are reassembled in rep order before aggregation). Estimate and
// error columns are reported in dequantized (real) units.
//
// relative_error = |private - true| / max(|true|, 1);
// rank_error_fraction = |rank(private) - target rank| / n.
ExperimentResult RunExperiment(const ExperimentConfig& config, int jobs = 1);

// CSV: fixed header, one row per repetition, then the aggregate row with
// rep = "mean". UTF-8, '.' decimals, LF line endings, NaN fields blank.
extern const char kRunCsvHeader[];
void WriteCsv(std::ostream& os, const ExperimentResult& result);

// Shortest round-trip decimal rendering; NaN renders as the empty string.
std::string FormatDouble(double v);

// Stream files: '#'-prefixed header lines, then one decimal number per line,
// quantized on ingest with `scheme`. Throws std::runtime_error on I/O or
// parse failures.
GeneratedStream ReadStreamFile(const std::string& path,
                               QuantizationScheme scheme);
void WriteStreamFile(const std::string& path, const GeneratedStream& stream);

// --- sensitivity probe ---------------------------------------------------

struct CoupledDivergenceResult {
  std::int64_t immediate = 0;   // |difference| right after the substitution
  std::int64_t persistent = 0;  // max |difference| over all later steps
};

// Runs two estimators over `items` and its one-position substitution with an
// identical coin sequence, isolating the effect of the substitution.
CoupledDivergenceResult ProbeCoupledStreams(std::span<const std::int64_t> items,
                                            std::size_t position,
                                            std::int64_t replacement, double q,
                                            std::uint64_t coin_seed);

struct SensitivityResult {
  std::int64_t immediate_max = 0;
  std::int64_t persistent_max = 0;
  std::uint64_t trials = 0;
  std::uint64_t immediate_bound_hits = 0;  // trials where immediate == 2
};

// For each trial: draw a fresh stream, substitute a random position with a
// random replacement draw, and measure coupled divergence. The tracked
// quantile is fixed at 0.5 and items are quantized at 0 digits; the
// divergence bound is translation-invariant and does not depend on either.
SensitivityResult SensitivityProbe(const DistributionSpec& dist,
                                   std::uint64_t n, std::uint64_t trials,
                                   std::uint64_t seed);

// --- accuracy report -------------------------------------------------------

struct AccuracyRow {
  std::string mechanism;
  double beta = 0.0;
  double alpha = 0.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t draws = 0;
  double one_sided_exceedance = 0.0;  // freq of noise >= alpha
  double two_sided_exceedance = 0.0;  // freq of |noise| >= alpha
};

// Analytic alpha for each mechanism at sensitivity 2, plus Monte-Carlo
// exceedance frequencies of the matching calibrated noise.
std::vector<AccuracyRow> AccuracyReport(double beta, std::uint64_t draws,
                                        std::uint64_t seed,
                                        double epsilon = 1.0,
                                        double delta = 0.04, double rho = 1.0);

// --- throughput --------------------------------------------------------------

struct ThroughputResult {
  double updates_per_sec = 0.0;
  double median_seconds = 0.0;
  std::uint64_t n = 0;
  std::int64_t checksum = 0;  // folds the final estimates; keeps the loop live
};

// Wall-clock timing of the update loop only: the stream is pre-materialized
// into a buffer of at most buffer_cap items and cycled, so generation cost
// stays out of the measurement. Reports the median over reps.
ThroughputResult ThroughputBench(const DistributionSpec& dist, std::uint64_t n,
                                 double q, int reps, std::uint64_t seed,
                                 std::uint64_t buffer_cap = 10'000'000);

}  // namespace frugaldp

#endif  // FRUGALDP_EXPERIMENT_H_
