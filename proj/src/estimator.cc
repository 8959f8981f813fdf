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
#include <limits>
#include <stdexcept>

namespace frugaldp {

namespace {

double Pow10(int digits) {
  double p = 1.0;
  for (int i = 0; i < digits; ++i) p *= 10.0;
  return p;
}

}  // namespace

FrugalEstimator::FrugalEstimator(double q, InitPolicy init_policy)
    : q_(q), init_policy_(init_policy) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile must lie in [0,1]");
  }
}

std::int64_t Quantize(double value, const QuantizationScheme& scheme,
                      bool* saturated) {
  if (saturated != nullptr) *saturated = false;
  double scaled = value * Pow10(scheme.digits);
  if (std::isnan(scaled)) {
    if (saturated != nullptr) *saturated = true;
    return 0;
  }
  const double nearest = std::nearbyint(scaled);
  if (std::abs(scaled - nearest) <=
      4.0 * std::abs(scaled) * std::numeric_limits<double>::epsilon()) {
    scaled = nearest;
  } else {
    scaled = std::floor(scaled);
  }
  // 2^63 is exactly representable; doubles in (-2^63, 2^63) cast safely.
  constexpr double kBound = 9223372036854775808.0;
  if (scaled >= kBound) {
    if (saturated != nullptr) *saturated = true;
    return std::numeric_limits<std::int64_t>::max();
  }
  if (scaled < -kBound) {
    if (saturated != nullptr) *saturated = true;
    return std::numeric_limits<std::int64_t>::min();
  }
  return static_cast<std::int64_t>(scaled);
}

double Dequantize(double value, const QuantizationScheme& scheme) {
  return value / Pow10(scheme.digits);
}

}  // namespace frugaldp
