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

#ifndef FRUGALDP_ESTIMATOR_H_
#define FRUGALDP_ESTIMATOR_H_

#include <cstdint>
#include <span>

#include "frugaldp/random.h"

namespace frugaldp {

enum class InitPolicy {
  kZero,       // estimate starts at 0
  kFirstItem,  // estimate starts at the first stream item (faster convergence)
};

// Fixed-point scheme mapping reals to stream-domain integers:
// quantize(r) = floor(r * 10^digits), dequantize(v) = v / 10^digits.
struct QuantizationScheme {
  int digits = 0;
};

// floor(value * 10^digits) as a signed 64-bit integer.
//
// Products within 4 ulps of an integer are snapped to it before flooring, so
// decimal inputs with at most `digits` fractional digits (e.g. 0.29 at two
// digits) quantize exactly instead of truncating one unit low.
//
// Out-of-range and non-finite products saturate to the representable extreme
// (NaN maps to 0) and set *saturated when the pointer is non-null.
std::int64_t Quantize(double value, const QuantizationScheme& scheme,
                      bool* saturated = nullptr);

// value / 10^digits. Takes a real so that noised (non-integer) estimates can
// be mapped back to stream units.
double Dequantize(double value, const QuantizationScheme& scheme);

// One-unit-of-memory streaming quantile estimator.
//
// Each arriving item moves the tracked estimate by exactly -1, 0 or +1:
// an item above the estimate raises it with probability q, an item below
// lowers it with probability 1-q, and a tie never moves it. The direction
// coin is supplied by the caller, one uniform per item, so that randomness
// consumption depends only on stream length and never on item values.
class FrugalEstimator {
 public:
  // Requires 0 <= q <= 1; throws std::invalid_argument otherwise.
  explicit FrugalEstimator(double q, InitPolicy init_policy = InitPolicy::kZero);

  // Applies one stream item. `u` must be a uniform draw from [0,1); it is
  // consumed (logically) even when the item causes no movement.
  //
  // The guard evaluation is branch-free (no short-circuiting), which keeps
  // per-item cost independent of the item values and of q.
  void Update(std::int64_t item, double u) {
    if (init_policy_ == InitPolicy::kFirstItem && items_seen_ == 0) {
      m_tilde_ = item;
      ++items_seen_;
      return;
    }
    const int up = static_cast<int>(item > m_tilde_) &
                   static_cast<int>(u > 1.0 - q_);
    const int down = static_cast<int>(item < m_tilde_) &
                     static_cast<int>(u > q_);
    m_tilde_ += up - down;
    ++items_seen_;
  }

  std::int64_t estimate() const { return m_tilde_; }
  std::uint64_t items_seen() const { return items_seen_; }
  double quantile() const { return q_; }
  InitPolicy init_policy() const { return init_policy_; }

 private:
  double q_;
  InitPolicy init_policy_;
  std::int64_t m_tilde_ = 0;
  std::uint64_t items_seen_ = 0;
};

// Folds the estimator over `items` in order, drawing exactly one uniform per
// item from `coins`. Two runs with equal seeds and equal-length streams
// consume identical randomness prefixes.
inline void ProcessStream(FrugalEstimator& estimator,
                          std::span<const std::int64_t> items, Rng& coins) {
  for (std::int64_t item : items) {
    estimator.Update(item, coins.NextUniform());
  }
}

}  // namespace frugaldp

#endif  // FRUGALDP_ESTIMATOR_H_
