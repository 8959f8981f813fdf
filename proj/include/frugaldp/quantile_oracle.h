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

#ifndef FRUGALDP_QUANTILE_ORACLE_H_
#define FRUGALDP_QUANTILE_ORACLE_H_

#include <cstdint>
#include <vector>

namespace frugaldp {

enum class QuantileSide { kLower, kUpper };

// Target 1-based rank of the q-quantile in a sample of size n:
// floor(1 + q(n-1)) for the lower quantile, ceil(1 + q(n-1)) for the upper.
std::uint64_t QuantileTargetRank(double q, std::uint64_t n, QuantileSide side);

// Exact ground truth over a materialized stream. Deliberately not a
// streaming structure: it exists to score estimates at desk scale, where the
// whole stream fits in memory. Immutable after construction; all queries are
// read-only and freely concurrent.
class RankedSample {
 public:
  // Throws std::invalid_argument on an empty sample.
  explicit RankedSample(std::vector<std::int64_t> values);

  std::uint64_t size() const { return sorted_.size(); }

  // Number of sample elements <= v (duplicates all count).
  std::uint64_t Rank(std::int64_t v) const;
  // Same, for a real-valued query such as a noised estimate.
  std::uint64_t Rank(double v) const;

  // The element whose 1-based rank is QuantileTargetRank(q, n, side).
  // Throws std::invalid_argument for q outside [0,1].
  std::int64_t Quantile(double q, QuantileSide side) const;

  // True iff the realized rank of v is within eps_rank * n of the target
  // rank of the q-quantile.
  bool RankWithin(std::int64_t v, double q, double eps_rank) const;

  const std::vector<std::int64_t>& sorted() const { return sorted_; }

 private:
  std::vector<std::int64_t> sorted_;
};

}  // namespace frugaldp

#endif  // FRUGALDP_QUANTILE_ORACLE_H_
