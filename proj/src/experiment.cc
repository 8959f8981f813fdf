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

#include "frugaldp/experiment.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "frugaldp/quantile_oracle.h"

namespace frugaldp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kChunkItems = std::size_t{1} << 20;

double Seconds(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double>(t1 - t0).count();
}

struct RepOutcome {
  std::int64_t raw = 0;
  double private_estimate = 0.0;
  double update_seconds = 0.0;
  std::uint64_t saturation_count = 0;
  std::vector<std::int64_t> collected;  // empty when the oracle is skipped
};

// Folds one repetition's stream through a fresh estimator, timing only the
// update loop. Generation happens in chunks so long streams never
// materialize unless oracle scoring asked for them.
RepOutcome RunOneRep(const ExperimentConfig& config, int rep,
                     std::span<const std::int64_t> replay_items,
                     std::uint64_t replay_saturation, bool score) {
  RepOutcome out;
  const auto r = static_cast<std::uint64_t>(rep);
  FrugalEstimator estimator(config.q, config.init_policy);
  Rng coins(DeriveSeed(config.master_seed, StreamPurpose::kEstimatorCoins, r));
  Rng noise(DeriveSeed(config.master_seed, StreamPurpose::kNoise, r));

  if (!replay_items.empty()) {
    const auto t0 = Clock::now();
    ProcessStream(estimator, replay_items, coins);
    out.update_seconds = Seconds(t0, Clock::now());
    out.saturation_count = replay_saturation;
  } else {
    StreamGenerator gen(config.dist, config.scheme,
                        DeriveSeed(config.master_seed, StreamPurpose::kData, r));
    std::vector<std::int64_t> chunk;
    chunk.reserve(std::min<std::uint64_t>(kChunkItems, config.n));
    if (score) out.collected.reserve(config.n);
    std::uint64_t remaining = config.n;
    while (remaining > 0) {
      const auto take =
          static_cast<std::size_t>(std::min<std::uint64_t>(kChunkItems, remaining));
      chunk.clear();
      for (std::size_t i = 0; i < take; ++i) chunk.push_back(gen.Next());
      const auto t0 = Clock::now();
      ProcessStream(estimator, chunk, coins);
      out.update_seconds += Seconds(t0, Clock::now());
      if (score) {
        out.collected.insert(out.collected.end(), chunk.begin(), chunk.end());
      }
      remaining -= take;
    }
    out.saturation_count = gen.saturation_count();
  }

  out.raw = estimator.estimate();
  out.private_estimate = Privatize(out.raw, config.mechanism, noise);
  return out;
}

RunRecord MakeRecord(const ExperimentConfig& config, const std::string& dataset,
                     int rep, RepOutcome outcome,
                     std::span<const std::int64_t> replay_items, bool score) {
  RunRecord rec;
  rec.dataset = dataset;
  rec.mechanism = std::string(config.mechanism.label());
  rec.q = config.q;
  rec.n = config.n;
  rec.epsilon = config.mechanism.epsilon();
  rec.delta = config.mechanism.delta();
  rec.rho = config.mechanism.rho();
  rec.rep = rep;
  rec.seed = config.master_seed;
  rec.raw_estimate = Dequantize(static_cast<double>(outcome.raw), config.scheme);
  rec.private_estimate = Dequantize(outcome.private_estimate, config.scheme);
  rec.updates_per_sec = static_cast<double>(config.n) /
                        std::max(outcome.update_seconds, 1e-12);
  rec.saturation_count = static_cast<double>(outcome.saturation_count);
  rec.oracle_skipped = !score;
  if (score) {
    const RankedSample sample(
        replay_items.empty()
            ? std::move(outcome.collected)
            : std::vector<std::int64_t>(replay_items.begin(),
                                        replay_items.end()));
    const std::int64_t truth = sample.Quantile(config.q, QuantileSide::kLower);
    rec.true_quantile = Dequantize(static_cast<double>(truth), config.scheme);
    rec.relative_error = std::abs(rec.private_estimate - rec.true_quantile) /
                         std::max(std::abs(rec.true_quantile), 1.0);
    const auto target =
        QuantileTargetRank(config.q, config.n, QuantileSide::kLower);
    const std::uint64_t realized = sample.Rank(outcome.private_estimate);
    const std::uint64_t diff =
        realized > target ? realized - target : target - realized;
    rec.rank_error_fraction =
        static_cast<double>(diff) / static_cast<double>(config.n);
  }
  return rec;
}

RunRecord MeanRecord(const std::vector<RunRecord>& records) {
  RunRecord mean = records.front();
  mean.rep = RunRecord::kMeanRep;
  const auto k = static_cast<double>(records.size());
  const auto avg = [&](double RunRecord::* field) {
    double total = 0.0;
    for (const RunRecord& r : records) total += r.*field;
    return total / k;
  };
  mean.true_quantile = avg(&RunRecord::true_quantile);
  mean.raw_estimate = avg(&RunRecord::raw_estimate);
  mean.private_estimate = avg(&RunRecord::private_estimate);
  mean.relative_error = avg(&RunRecord::relative_error);
  mean.rank_error_fraction = avg(&RunRecord::rank_error_fraction);
  mean.updates_per_sec = avg(&RunRecord::updates_per_sec);
  mean.saturation_count = avg(&RunRecord::saturation_count);
  return mean;
}

}  // namespace

void ExperimentConfig::Validate() const {
  dist.Validate();
  if (input.empty() && n == 0) {
    throw std::invalid_argument("stream length must be at least 1");
  }
  if (reps < 1) {
    throw std::invalid_argument("repetition count must be at least 1");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile must lie in [0,1]");
  }
  if (scheme.digits < 0 || scheme.digits > 18) {
    throw std::invalid_argument("digits must lie in [0, 18]");
  }
}

ExperimentResult RunExperiment(const ExperimentConfig& raw_config, int jobs) {
  ExperimentConfig config = raw_config;
  GeneratedStream replay;
  std::string dataset(config.dist.name());
  if (!config.input.empty()) {
    replay = ReadStreamFile(config.input, config.scheme);
    config.n = replay.items.size();
    const auto slash = config.input.find_last_of('/');
    dataset = "file:" + config.input.substr(
                            slash == std::string::npos ? 0 : slash + 1);
  }
  config.Validate();
  const bool score = config.n <= config.oracle_cap;
  const std::span<const std::int64_t> replay_items(replay.items);

  const auto run_rep = [&](int rep) {
    return MakeRecord(config, dataset, rep,
                      RunOneRep(config, rep, replay_items,
                                replay.saturation_count, score),
                      replay_items, score);
  };

  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(config.reps));
  if (jobs <= 1) {
    for (int rep = 0; rep < config.reps; ++rep) {
      result.records[static_cast<std::size_t>(rep)] = run_rep(rep);
    }
  } else {
    for (int start = 0; start < config.reps; start += jobs) {
      const int end = std::min(config.reps, start + jobs);
      std::vector<std::future<RunRecord>> wave;
      wave.reserve(static_cast<std::size_t>(end - start));
      for (int rep = start; rep < end; ++rep) {
        wave.push_back(std::async(std::launch::async, run_rep, rep));
      }
      for (int rep = start; rep < end; ++rep) {
        result.records[static_cast<std::size_t>(rep)] =
            wave[static_cast<std::size_t>(rep - start)].get();
      }
    }
  }
  result.mean = MeanRecord(result.records);
  return result;
}

const char kRunCsvHeader[] =
    "dataset,mechanism,q,n,epsilon,delta,rho,rep,seed,true_quantile,"
    "raw_estimate,private_estimate,relative_error,rank_error_fraction,"
    "updates_per_sec,saturation_count";

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

void WriteRow(std::ostream& os, const RunRecord& r) {
  os << r.dataset << ',' << r.mechanism << ',' << FormatDouble(r.q) << ','
     << r.n << ',' << FormatDouble(r.epsilon) << ',' << FormatDouble(r.delta)
     << ',' << FormatDouble(r.rho) << ',';
  if (r.rep == RunRecord::kMeanRep) {
    os << "mean";
  } else {
    os << r.rep;
  }
  os << ',' << r.seed << ',' << FormatDouble(r.true_quantile) << ','
     << FormatDouble(r.raw_estimate) << ','
     << FormatDouble(r.private_estimate) << ','
     << FormatDouble(r.relative_error) << ','
     << FormatDouble(r.rank_error_fraction) << ','
     << FormatDouble(r.updates_per_sec) << ','
     << FormatDouble(r.saturation_count) << '\n';
}

}  // namespace

void WriteCsv(std::ostream& os, const ExperimentResult& result) {
  os << kRunCsvHeader << '\n';
  for (const RunRecord& r : result.records) WriteRow(os, r);
  WriteRow(os, result.mean);
}

GeneratedStream ReadStreamFile(const std::string& path,
                               QuantizationScheme scheme) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open stream file: " + path);
  }
  GeneratedStream out;
  out.scheme = scheme;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    // Tolerate trailing CR from foreign line endings.
    if (line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double value = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": not a decimal number: " + line);
    }
    bool saturated = false;
    out.items.push_back(Quantize(value, scheme, &saturated));
    out.saturation_count += saturated ? 1 : 0;
  }
  if (out.items.empty()) {
    throw std::runtime_error("stream file has no items: " + path);
  }
  return out;
}

void WriteStreamFile(const std::string& path, const GeneratedStream& stream) {
  std::ofstream outf(path);
  if (!outf) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  outf << "# dataset=" << stream.spec.name()
       << " params=" << FormatDouble(stream.spec.a) << ';'
       << FormatDouble(stream.spec.b) << " seed=" << stream.seed
       << " digits=" << stream.scheme.digits << " n=" << stream.items.size()
       << '\n';
  for (std::int64_t item : stream.items) outf << item << '\n';
  if (!outf) {
    throw std::runtime_error("failed writing stream file: " + path);
  }
}

CoupledDivergenceResult ProbeCoupledStreams(
    std::span<const std::int64_t> items, std::size_t position,
    std::int64_t replacement, double q, std::uint64_t coin_seed) {
  if (position >= items.size()) {
    throw std::invalid_argument("substitution position out of range");
  }
  FrugalEstimator original(q);
  FrugalEstimator substituted(q);
  Rng coins(coin_seed);
  CoupledDivergenceResult result;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double u = coins.NextUniform();
    original.Update(items[i], u);
    substituted.Update(i == position ? replacement : items[i], u);
    if (i >= position) {
      const std::int64_t gap =
          std::abs(original.estimate() - substituted.estimate());
      if (i == position) {
        result.immediate = gap;
      } else {
        result.persistent = std::max(result.persistent, gap);
      }
    }
  }
  return result;
}

SensitivityResult SensitivityProbe(const DistributionSpec& dist,
                                   std::uint64_t n, std::uint64_t trials,
                                   std::uint64_t seed) {
  dist.Validate();
  if (n < 2) {
    throw std::invalid_argument("probe needs streams of at least 2 items");
  }
  if (trials < 1) {
    throw std::invalid_argument("probe needs at least one trial");
  }
  constexpr double kProbeQuantile = 0.5;
  const QuantizationScheme scheme{};
  SensitivityResult result;
  result.trials = trials;
  std::vector<std::int64_t> items(static_cast<std::size_t>(n));
  for (std::uint64_t t = 0; t < trials; ++t) {
    StreamGenerator gen(dist, scheme,
                        DeriveSeed(seed, StreamPurpose::kProbe, 3 * t));
    for (auto& item : items) item = gen.Next();
    Rng meta(DeriveSeed(seed, StreamPurpose::kProbe, 3 * t + 1));
    const auto position = static_cast<std::size_t>(meta.NextU64() % n);
    const std::int64_t replacement = Quantize(dist.Sample(meta), scheme);
    const auto divergence = ProbeCoupledStreams(
        items, position, replacement, kProbeQuantile,
        DeriveSeed(seed, StreamPurpose::kProbe, 3 * t + 2));
    result.immediate_max = std::max(result.immediate_max, divergence.immediate);
    result.persistent_max =
        std::max(result.persistent_max, divergence.persistent);
    if (divergence.immediate == 2) ++result.immediate_bound_hits;
  }
  return result;
}

std::vector<AccuracyRow> AccuracyReport(double beta, std::uint64_t draws,
                                        std::uint64_t seed, double epsilon,
                                        double delta, double rho) {
  if (draws == 0) {
    throw std::invalid_argument("draw count must be at least 1");
  }
  const PrivacySpec specs[] = {
      PrivacySpec::Laplace(epsilon),
      PrivacySpec::Gaussian(epsilon, delta),
      PrivacySpec::Zcdp(rho),
  };
  const AccuracyBound bounds[] = {
      LaplaceAccuracy(beta, epsilon, kEstimateSensitivity),
      GaussianAccuracy(beta, epsilon, delta, kEstimateSensitivity),
      ZcdpAccuracy(beta, rho, kEstimateSensitivity),
  };
  std::vector<AccuracyRow> rows;
  for (int i = 0; i < 3; ++i) {
    const PrivacySpec& spec = specs[i];
    AccuracyRow row;
    row.mechanism = std::string(spec.label());
    row.beta = beta;
    row.alpha = bounds[i].alpha;
    row.epsilon = spec.epsilon();
    row.delta = spec.delta();
    row.rho = spec.rho();
    row.draws = draws;
    Rng rng(DeriveSeed(seed, StreamPurpose::kNoise,
                       static_cast<std::uint64_t>(i)));
    std::uint64_t above = 0;
    std::uint64_t outside = 0;
    for (std::uint64_t d = 0; d < draws; ++d) {
      const double noise = spec.kind() == MechanismKind::kLaplace
                               ? LaplaceNoise(spec.NoiseScale(), rng)
                               : GaussianNoise(spec.NoiseScale(), rng);
      above += noise >= row.alpha ? 1 : 0;
      outside += std::abs(noise) >= row.alpha ? 1 : 0;
    }
    row.one_sided_exceedance =
        static_cast<double>(above) / static_cast<double>(draws);
    row.two_sided_exceedance =
        static_cast<double>(outside) / static_cast<double>(draws);
    rows.push_back(std::move(row));
  }
  return rows;
}

ThroughputResult ThroughputBench(const DistributionSpec& dist, std::uint64_t n,
                                 double q, int reps, std::uint64_t seed,
                                 std::uint64_t buffer_cap) {
  if (n == 0 || reps < 1 || buffer_cap == 0) {
    throw std::invalid_argument("throughput bench needs n, reps, cap >= 1");
  }
  const auto buffer_len =
      static_cast<std::size_t>(std::min<std::uint64_t>(n, buffer_cap));
  StreamGenerator gen(dist, QuantizationScheme{},
                      DeriveSeed(seed, StreamPurpose::kData, 0));
  std::vector<std::int64_t> buffer(buffer_len);
  for (auto& item : buffer) item = gen.Next();

  ThroughputResult result;
  result.n = n;
  std::vector<double> seconds;
  seconds.reserve(static_cast<std::size_t>(reps));
  for (int rep = -1; rep < reps; ++rep) {  // rep -1 is an untimed warmup
    FrugalEstimator estimator(q);
    Rng coins(DeriveSeed(seed, StreamPurpose::kEstimatorCoins,
                         static_cast<std::uint64_t>(rep + 1)));
    const std::uint64_t total = rep < 0 ? std::min<std::uint64_t>(n, buffer_len) : n;
    std::uint64_t remaining = total;
    const auto t0 = Clock::now();
    while (remaining > 0) {
      const auto take = static_cast<std::size_t>(
          std::min<std::uint64_t>(buffer_len, remaining));
      for (std::size_t i = 0; i < take; ++i) {
        estimator.Update(buffer[i], coins.NextUniform());
      }
      remaining -= take;
    }
    const double elapsed = Seconds(t0, Clock::now());
    result.checksum ^= estimator.estimate();
    if (rep >= 0) seconds.push_back(elapsed);
  }
  std::sort(seconds.begin(), seconds.end());
  const std::size_t mid = seconds.size() / 2;
  result.median_seconds =
      seconds.size() % 2 == 1
          ? seconds[mid]
          : 0.5 * (seconds[mid - 1] + seconds[mid]);
  result.updates_per_sec =
      static_cast<double>(n) / std::max(result.median_seconds, 1e-12);
  return result;
}

}  // namespace frugaldp
