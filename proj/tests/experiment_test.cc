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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace frugaldp {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    path_ = ::testing::TempDir() + "frugaldp_test_" +
            std::to_string(counter_++) + ".txt";
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::string path_;
};

ExperimentConfig SmallConfig() {
  ExperimentConfig config;
  config.dist = DistributionSpec::Normal();
  config.n = 2000;
  config.q = 0.5;
  config.mechanism = PrivacySpec::Laplace(1.0);
  config.reps = 3;
  config.master_seed = 99;
  return config;
}

TEST(ExperimentConfigTest, ValidatesInputs) {
  ExperimentConfig config = SmallConfig();
  config.n = 0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig();
  config.reps = 0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig();
  config.q = 1.5;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig();
  config.scheme.digits = 19;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  EXPECT_NO_THROW(SmallConfig().Validate());
}

TEST(RunExperimentTest, ConstantReplayStreamWithVanishingNoise) {
  std::string lines;
  for (int i = 0; i < 1000; ++i) lines += "42\n";
  const TempFile file(lines);

  ExperimentConfig config = SmallConfig();
  config.input = file.path();
  config.q = 0.5;
  config.reps = 1;
  config.mechanism = PrivacySpec::Laplace(1e6);
  const auto result = RunExperiment(config);

  ASSERT_EQ(result.records.size(), 1u);
  const RunRecord& rec = result.records[0];
  EXPECT_EQ(rec.n, 1000u);
  EXPECT_DOUBLE_EQ(rec.raw_estimate, 42.0);
  EXPECT_NEAR(rec.private_estimate, 42.0, 0.01);
  EXPECT_DOUBLE_EQ(rec.true_quantile, 42.0);
  EXPECT_NEAR(rec.relative_error, 0.0, 0.001);
  EXPECT_EQ(rec.dataset.rfind("file:", 0), 0u);
}

TEST(RunExperimentTest, CsvSchemaIsStable) {
  const auto result = RunExperiment(SmallConfig());
  std::ostringstream os;
  WriteCsv(os, result);
  const std::string csv = os.str();
  ASSERT_FALSE(csv.empty());
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');

  std::istringstream in(csv);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, kRunCsvHeader);
  const std::size_t want_fields = SplitCsvLine(kRunCsvHeader).size();
  int rows = 0;
  std::string last_rep;
  while (std::getline(in, line)) {
    const auto fields = SplitCsvLine(line);
    ASSERT_EQ(fields.size(), want_fields) << line;
    last_rep = fields[7];
    ++rows;
  }
  EXPECT_EQ(rows, 4);  // 3 reps + mean
  EXPECT_EQ(last_rep, "mean");
}

TEST(RunExperimentTest, MeanRowIsArithmeticMeanOfReps) {
  const auto result = RunExperiment(SmallConfig());
  double raw = 0.0;
  double priv = 0.0;
  double rank_err = 0.0;
  for (const RunRecord& r : result.records) {
    raw += r.raw_estimate;
    priv += r.private_estimate;
    rank_err += r.rank_error_fraction;
  }
  const auto k = static_cast<double>(result.records.size());
  EXPECT_DOUBLE_EQ(result.mean.raw_estimate, raw / k);
  EXPECT_DOUBLE_EQ(result.mean.private_estimate, priv / k);
  EXPECT_DOUBLE_EQ(result.mean.rank_error_fraction, rank_err / k);
  EXPECT_EQ(result.mean.rep, RunRecord::kMeanRep);
}

TEST(RunExperimentTest, RerunsAreBitIdentical) {
  const auto first = RunExperiment(SmallConfig());
  const auto second = RunExperiment(SmallConfig());
  ASSERT_EQ(first.records.size(), second.records.size());
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    EXPECT_EQ(first.records[i].raw_estimate, second.records[i].raw_estimate);
    // Laplace noise comes from the documented inverse CDF, so the private
    // estimate reproduces bit-for-bit as well.
    EXPECT_EQ(first.records[i].private_estimate,
              second.records[i].private_estimate);
    EXPECT_EQ(FormatDouble(first.records[i].private_estimate),
              FormatDouble(second.records[i].private_estimate));
  }
}

TEST(RunExperimentTest, ParallelRepsMatchSerialReps) {
  ExperimentConfig config = SmallConfig();
  config.reps = 6;
  const auto serial = RunExperiment(config, /*jobs=*/1);
  const auto parallel = RunExperiment(config, /*jobs=*/4);
  ASSERT_EQ(serial.records.size(), parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    EXPECT_EQ(serial.records[i].raw_estimate, parallel.records[i].raw_estimate);
    EXPECT_EQ(serial.records[i].private_estimate,
              parallel.records[i].private_estimate);
    EXPECT_EQ(serial.records[i].true_quantile,
              parallel.records[i].true_quantile);
    EXPECT_EQ(serial.records[i].rep, parallel.records[i].rep);
  }
}

TEST(RunExperimentTest, OracleCapSkipsScoringWithWarningFlag) {
  ExperimentConfig config = SmallConfig();
  config.n = 2000;
  config.oracle_cap = 1000;
  const auto result = RunExperiment(config);
  for (const RunRecord& rec : result.records) {
    EXPECT_TRUE(rec.oracle_skipped);
    EXPECT_TRUE(std::isnan(rec.true_quantile));
    EXPECT_TRUE(std::isnan(rec.relative_error));
    EXPECT_TRUE(std::isnan(rec.rank_error_fraction));
    EXPECT_GT(rec.updates_per_sec, 0.0);
  }
  // Blank CSV fields, not "nan".
  std::ostringstream os;
  WriteCsv(os, result);
  EXPECT_EQ(os.str().find("nan"), std::string::npos);
}

TEST(RunExperimentTest, GaussianMechanismsPopulateTheirColumns) {
  ExperimentConfig config = SmallConfig();
  config.mechanism = PrivacySpec::Gaussian(1.0, 0.04);
  const auto result = RunExperiment(config);
  EXPECT_EQ(result.records[0].mechanism, "gauss");
  EXPECT_DOUBLE_EQ(result.records[0].epsilon, 1.0);
  EXPECT_DOUBLE_EQ(result.records[0].delta, 0.04);
  EXPECT_TRUE(std::isnan(result.records[0].rho));

  config.mechanism = PrivacySpec::Zcdp(1.0);
  const auto zcdp = RunExperiment(config);
  EXPECT_EQ(zcdp.records[0].mechanism, "zcdp");
  EXPECT_DOUBLE_EQ(zcdp.records[0].rho, 1.0);
  EXPECT_TRUE(std::isnan(zcdp.records[0].epsilon));
}

TEST(StreamFileTest, QuantizesOnIngest) {
  const TempFile file("# a comment line\n3.141\n2.5\n-2.7\n");
  const auto stream = ReadStreamFile(file.path(), {.digits = 3});
  EXPECT_EQ(stream.items, (std::vector<std::int64_t>{3141, 2500, -2700}));
  EXPECT_EQ(stream.saturation_count, 0u);
}

TEST(StreamFileTest, RejectsMissingOrMalformedFiles) {
  EXPECT_THROW(ReadStreamFile("/nonexistent/stream.txt", {}),
               std::runtime_error);
  const TempFile bad("12\nnot-a-number\n");
  EXPECT_THROW(ReadStreamFile(bad.path(), {}), std::runtime_error);
  const TempFile empty("# only a header\n");
  EXPECT_THROW(ReadStreamFile(empty.path(), {}), std::runtime_error);
}

TEST(StreamFileTest, WriteThenReadRoundTrips) {
  const auto stream = Generate(DistributionSpec::Gamma(), 200, 17, {});
  const TempFile placeholder("");
  WriteStreamFile(placeholder.path(), stream);

  std::ifstream in(placeholder.path());
  std::string header;
  ASSERT_TRUE(std::getline(in, header));
  EXPECT_EQ(header.rfind("# dataset=gamma", 0), 0u);

  const auto replayed = ReadStreamFile(placeholder.path(), {});
  EXPECT_EQ(replayed.items, stream.items);
}

TEST(SensitivityProbeTest, DivergenceNeverExceedsTwo) {
  const auto result =
      SensitivityProbe(DistributionSpec::Normal(), 500, 300, 12345);
  EXPECT_EQ(result.trials, 300u);
  EXPECT_EQ(result.immediate_max, 2);  // the bound is attainable
  EXPECT_LE(result.persistent_max, 2);
  EXPECT_GE(result.immediate_bound_hits, 1u);
}

TEST(SensitivityProbeTest, IdenticalReplacementNeverDiverges) {
  const auto stream = Generate(DistributionSpec::Normal(), 400, 21, {});
  for (std::size_t pos : {std::size_t{0}, std::size_t{200}, std::size_t{399}}) {
    const auto divergence =
        ProbeCoupledStreams(stream.items, pos, stream.items[pos], 0.5, 777);
    EXPECT_EQ(divergence.immediate, 0);
    EXPECT_EQ(divergence.persistent, 0);
  }
}

TEST(SensitivityProbeTest, ValidatesArguments) {
  const auto stream = Generate(DistributionSpec::Normal(), 10, 1, {});
  EXPECT_THROW(ProbeCoupledStreams(stream.items, 10, 0, 0.5, 1),
               std::invalid_argument);
  EXPECT_THROW(SensitivityProbe(DistributionSpec::Normal(), 1, 10, 1),
               std::invalid_argument);
  EXPECT_THROW(SensitivityProbe(DistributionSpec::Normal(), 10, 0, 1),
               std::invalid_argument);
}

TEST(AccuracyReportTest, MatchesAnalyticAlphas) {
  const auto rows = AccuracyReport(0.04, 100000, 31337);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].mechanism, "laplace");
  EXPECT_NEAR(rows[0].alpha, 6.437751649736401, 1e-12);
  EXPECT_EQ(rows[1].mechanism, "gauss");
  EXPECT_NEAR(rows[1].alpha, 9.186708270799773, 1e-9);
  EXPECT_EQ(rows[2].mechanism, "zcdp");
  EXPECT_NEAR(rows[2].alpha, 2.475843985422489, 1e-9);

  // Exact tails: two-sided beta for Laplace, one-sided beta for the
  // Gaussian-calibrated mechanisms.
  EXPECT_NEAR(rows[0].two_sided_exceedance, 0.04, 0.01);
  EXPECT_NEAR(rows[0].one_sided_exceedance, 0.02, 0.01);
  EXPECT_NEAR(rows[1].one_sided_exceedance, 0.04, 0.01);
  EXPECT_NEAR(rows[2].one_sided_exceedance, 0.04, 0.01);
}

TEST(ThroughputBenchTest, ReportsPositiveRates) {
  const auto result =
      ThroughputBench(DistributionSpec::Normal(), 200000, 0.99, 3, 5);
  EXPECT_EQ(result.n, 200000u);
  EXPECT_GT(result.updates_per_sec, 0.0);
  EXPECT_GT(result.median_seconds, 0.0);
}

TEST(FormatDoubleTest, ShortestRoundTripForms) {
  EXPECT_EQ(FormatDouble(0.04), "0.04");
  EXPECT_EQ(FormatDouble(42.0), "42");
  EXPECT_EQ(FormatDouble(std::numeric_limits<double>::quiet_NaN()), "");
  const double value = 6.437751649736401;
  EXPECT_EQ(std::stod(FormatDouble(value)), value);
}

}  // namespace
}  // namespace frugaldp
