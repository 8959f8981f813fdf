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

#include "frugaldp/quantile_oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frugaldp {

std::uint64_t QuantileTargetRank(double q, std::uint64_t n,
                                 QuantileSide side) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile must lie in [0,1]");
  }
  if (n == 0) {
    throw std::invalid_argument("sample must be non-empty");
  }
  const double pos = 1.0 + q * static_cast<double>(n - 1);
  const double rank =
      side == QuantileSide::kLower ? std::floor(pos) : std::ceil(pos);
  // Clamp against floating-point spill just outside [1, n].
  return static_cast<std::uint64_t>(
      std::min(std::max(rank, 1.0), static_cast<double>(n)));
}

RankedSample::RankedSample(std::vector<std::int64_t> values)
    : sorted_(std::move(values)) {
  if (sorted_.empty()) {
    throw std::invalid_argument("sample must be non-empty");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

std::uint64_t RankedSample::Rank(std::int64_t v) const {
  return static_cast<std::uint64_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), v) - sorted_.begin());
}

std::uint64_t RankedSample::Rank(double v) const {
  if (std::isnan(v)) return 0;
  if (v >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    return size();
  }
  if (v < static_cast<double>(std::numeric_limits<std::int64_t>::min())) {
    return 0;
  }
  // Integer elements <= real v iff <= floor(v).
  return Rank(static_cast<std::int64_t>(std::floor(v)));
}

std::int64_t RankedSample::Quantile(double q, QuantileSide side) const {
  const std::uint64_t rank = QuantileTargetRank(q, size(), side);
  return sorted_[rank - 1];
}

bool RankedSample::RankWithin(std::int64_t v, double q,
                              double eps_rank) const {
  if (!(eps_rank > 0.0)) {
    throw std::invalid_argument("eps_rank must be positive");
  }
  const std::uint64_t target = QuantileTargetRank(q, size(), QuantileSide::kLower);
  const std::uint64_t realized = Rank(v);
  const std::uint64_t diff =
      realized > target ? realized - target : target - realized;
  return static_cast<double>(diff) <= eps_rank * static_cast<double>(size());
}

}  // namespace frugaldp
