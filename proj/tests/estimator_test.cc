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

#include "frugaldp/estimator.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "frugaldp/distributions.h"
#include "frugaldp/random.h"

namespace frugaldp {
namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kInt64Min = std::numeric_limits<std::int64_t>::min();

// Drives the estimate up to `target` with coin values that always pass the
// increment guard (q > 0 assumed).
void RaiseTo(FrugalEstimator& est, std::int64_t target) {
  while (est.estimate() < target) {
    est.Update(target, 0.999999);
  }
}

TEST(RngTest, EqualSeedsProduceIdenticalSequences) {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.NextU64(), b.NextU64());
  }
}

TEST(RngTest, UniformStaysInHalfOpenUnitInterval) {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.NextUniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngTest, DerivedSubstreamsDiffer) {
  const std::uint64_t master = 42;
  const std::uint64_t data0 = DeriveSeed(master, StreamPurpose::kData, 0);
  const std::uint64_t data1 = DeriveSeed(master, StreamPurpose::kData, 1);
  const std::uint64_t coins0 =
      DeriveSeed(master, StreamPurpose::kEstimatorCoins, 0);
  EXPECT_NE(data0, data1);
  EXPECT_NE(data0, coins0);
  EXPECT_EQ(data0, DeriveSeed(master, StreamPurpose::kData, 0));
}

TEST(EstimatorTest, StartsAtZero) {
  FrugalEstimator est(0.5);
  EXPECT_EQ(est.estimate(), 0);
  EXPECT_EQ(est.items_seen(), 0u);

  FrugalEstimator defaults(0.99);
  EXPECT_EQ(defaults.estimate(), 0);
}

TEST(EstimatorTest, RejectsOutOfRangeQuantile) {
  EXPECT_THROW(FrugalEstimator(1.1), std::invalid_argument);
  EXPECT_THROW(FrugalEstimator(-0.1), std::invalid_argument);
  EXPECT_THROW(FrugalEstimator(std::numeric_limits<double>::quiet_NaN()),
               std::invalid_argument);
  EXPECT_NO_THROW(FrugalEstimator(0.0));
  EXPECT_NO_THROW(FrugalEstimator(1.0));
}

TEST(EstimatorTest, TieNeverMoves) {
  FrugalEstimator est(0.5);
  RaiseTo(est, 5);
  for (double u : {0.0, 0.01, 0.5, 0.99}) {
    est.Update(5, u);
    EXPECT_EQ(est.estimate(), 5);
  }
}

TEST(EstimatorTest, QuantileOneAlwaysIncrements) {
  FrugalEstimator est(1.0);
  est.Update(10, 0.5);
  EXPECT_EQ(est.estimate(), 1);
}

TEST(EstimatorTest, QuantileZeroAlwaysDecrements) {
  FrugalEstimator est(0.0, InitPolicy::kFirstItem);
  est.Update(7, 0.4);
  ASSERT_EQ(est.estimate(), 7);
  est.Update(3, 0.5);
  EXPECT_EQ(est.estimate(), 6);
}

TEST(EstimatorTest, FailedCoinGuardMeansNoMovement) {
  FrugalEstimator est(0.5);
  est.Update(100, 0.3);  // needs u > 1 - q = 0.5
  EXPECT_EQ(est.estimate(), 0);
  EXPECT_EQ(est.items_seen(), 1u);
}

TEST(EstimatorTest, FirstItemPolicySetsEstimateWithoutStepping) {
  FrugalEstimator est(0.5, InitPolicy::kFirstItem);
  est.Update(42, 0.99);  // a Zero-policy estimator would have stepped to 1
  EXPECT_EQ(est.estimate(), 42);
  EXPECT_EQ(est.items_seen(), 1u);
  est.Update(45, 0.99);
  EXPECT_EQ(est.estimate(), 43);
}

TEST(EstimatorTest, EmptyStreamLeavesStateUnchanged) {
  FrugalEstimator est(0.25);
  Rng coins(5);
  ProcessStream(est, std::span<const std::int64_t>{}, coins);
  EXPECT_EQ(est.estimate(), 0);
  EXPECT_EQ(est.items_seen(), 0u);
}

// A constant stream pulls the estimate to its value and freezes there: once
// the estimate equals the item, both movement guards are strict and fail.
TEST(EstimatorTest, ConstantStreamIsAbsorbing) {
  const std::vector<std::int64_t> items(10000, 42);
  FrugalEstimator est(0.5);
  Rng coins(99);
  ProcessStream(est, items, coins);
  EXPECT_EQ(est.estimate(), 42);
  EXPECT_EQ(est.items_seen(), items.size());

  const std::int64_t frozen = est.estimate();
  ProcessStream(est, items, coins);
  EXPECT_EQ(est.estimate(), frozen);
}

// Randomness consumption depends only on stream length, never on values,
// quantile, or init policy.
TEST(EstimatorTest, ConsumesExactlyOneDrawPerItem) {
  const std::uint64_t seed = 31337;
  std::vector<std::int64_t> wild;
  Rng values(3);
  for (int i = 0; i < 512; ++i) {
    wild.push_back(static_cast<std::int64_t>(values.NextU64() % 7) - 3);
  }
  const std::vector<std::int64_t> calm(512, 0);

  Rng coins_a(seed);
  Rng coins_b(seed);
  Rng reference(seed);
  FrugalEstimator a(0.5);
  FrugalEstimator b(0.9, InitPolicy::kFirstItem);
  ProcessStream(a, wild, coins_a);
  ProcessStream(b, calm, coins_b);
  for (std::size_t i = 0; i < wild.size(); ++i) reference.NextUniform();

  const std::uint64_t next = reference.NextU64();
  EXPECT_EQ(coins_a.NextU64(), next);
  EXPECT_EQ(coins_b.NextU64(), next);
}

TEST(EstimatorTest, EveryUpdateMovesAtMostOneStep) {
  Rng rng(11);
  for (double q : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    FrugalEstimator est(q);
    for (int i = 0; i < 20000; ++i) {
      const std::int64_t before = est.estimate();
      const auto item = static_cast<std::int64_t>(rng.NextU64() % 41) - 20;
      est.Update(item, rng.NextUniform());
      const std::int64_t after = est.estimate();
      ASSERT_LE(std::abs(after - before), 1);
      if (item == before) {
        ASSERT_EQ(after, before);
      }
    }
  }
}

TEST(EstimatorTest, DeterministicGivenSeedStreamAndPolicy) {
  const auto stream =
      Generate(DistributionSpec::Normal(), 20000, 77, QuantizationScheme{});
  for (InitPolicy policy : {InitPolicy::kZero, InitPolicy::kFirstItem}) {
    FrugalEstimator a(0.7, policy);
    FrugalEstimator b(0.7, policy);
    Rng coins_a(1234);
    Rng coins_b(1234);
    ProcessStream(a, stream.items, coins_a);
    ProcessStream(b, stream.items, coins_b);
    EXPECT_EQ(a.estimate(), b.estimate());
    EXPECT_EQ(a.items_seen(), b.items_seen());
  }
}

TEST(EstimatorTest, EdgeQuantilesAreMonotone) {
  const auto stream =
      Generate(DistributionSpec::Uniform(-50, 50), 50000, 13, QuantizationScheme{});
  FrugalEstimator up(1.0);
  FrugalEstimator down(0.0);
  Rng coins(17);
  std::int64_t last_up = up.estimate();
  std::int64_t last_down = down.estimate();
  for (std::int64_t item : stream.items) {
    const double u = coins.NextUniform();
    up.Update(item, u);
    down.Update(item, u);
    ASSERT_GE(up.estimate(), last_up);
    ASSERT_LE(down.estimate(), last_down);
    last_up = up.estimate();
    last_down = down.estimate();
  }
}

// Monte-Carlo oracle: the median of Normal(50, 2) is 50 by symmetry, so the
// mean terminal estimate over ten long runs must land nearby.
TEST(EstimatorTest, ConvergesToNormalMedian) {
  const std::uint64_t n = 1000000;
  double total = 0.0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    StreamGenerator gen(DistributionSpec::Normal(50, 2), QuantizationScheme{},
                        DeriveSeed(2024, StreamPurpose::kData, rep));
    FrugalEstimator est(0.5);
    Rng coins(DeriveSeed(2024, StreamPurpose::kEstimatorCoins, rep));
    for (std::uint64_t i = 0; i < n; ++i) {
      est.Update(gen.Next(), coins.NextUniform());
    }
    total += static_cast<double>(est.estimate());
  }
  EXPECT_NEAR(total / 10.0, 50.0, 2.0);
}

TEST(QuantizeTest, MatchesWorkedExamples) {
  EXPECT_EQ(Quantize(3.141, {.digits = 3}), 3141);
  EXPECT_EQ(Quantize(-2.7, {.digits = 0}), -3);
  EXPECT_EQ(Quantize(5.0, {.digits = 2}), 500);
}

TEST(QuantizeTest, SnapsDecimalLiteralsBeforeFlooring) {
  // 0.29 * 100 rounds to 28.999999999999996 in binary; the snap keeps the
  // mathematical floor.
  EXPECT_EQ(Quantize(0.29, {.digits = 2}), 29);
  EXPECT_EQ(Quantize(1.005, {.digits = 3}), 1005);
  // Genuine truncation still truncates.
  EXPECT_EQ(Quantize(3.1409, {.digits = 3}), 3140);
}

TEST(QuantizeTest, SaturatesOutOfRangeValues) {
  bool saturated = false;
  EXPECT_EQ(Quantize(1e300, {.digits = 0}, &saturated), kInt64Max);
  EXPECT_TRUE(saturated);
  EXPECT_EQ(Quantize(-1e300, {.digits = 0}, &saturated), kInt64Min);
  EXPECT_TRUE(saturated);
  EXPECT_EQ(Quantize(1e18, {.digits = 3}, &saturated), kInt64Max);
  EXPECT_TRUE(saturated);
  EXPECT_EQ(Quantize(std::numeric_limits<double>::quiet_NaN(), {.digits = 0},
                     &saturated),
            0);
  EXPECT_TRUE(saturated);
  Quantize(12.5, {.digits = 0}, &saturated);
  EXPECT_FALSE(saturated);
}

TEST(QuantizeTest, DequantizeMatchesWorkedExamples) {
  EXPECT_DOUBLE_EQ(Dequantize(3141.0, {.digits = 3}), 3.141);
  EXPECT_DOUBLE_EQ(Dequantize(0.0, {.digits = 5}), 0.0);
  EXPECT_DOUBLE_EQ(Dequantize(503.77, {.digits = 2}), 5.0377);
}

TEST(QuantizeTest, RoundTripErrorStaysBelowOneLatticeUnit) {
  Rng rng(555);
  for (int digits = 0; digits <= 6; ++digits) {
    const QuantizationScheme scheme{.digits = digits};
    const double lattice = std::pow(10.0, -digits);
    for (int i = 0; i < 2000; ++i) {
      const double r = (rng.NextUniform() - 0.5) * 2e6;
      const double back = Dequantize(static_cast<double>(Quantize(r, scheme)), scheme);
      ASSERT_LT(std::abs(back - r), lattice) << "digits=" << digits << " r=" << r;
    }
  }
}

}  // namespace
}  // namespace frugaldp
