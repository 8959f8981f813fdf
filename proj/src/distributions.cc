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

#include "frugaldp/distributions.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frugaldp {

namespace {

std::string LowerNoSeparators(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

DistributionSpec DistributionSpec::Uniform(double lo, double hi) {
  return {DistFamily::kUniform, lo, hi};
}
DistributionSpec DistributionSpec::ChiSquare(double k) {
  return {DistFamily::kChiSquare, k, 0.0};
}
DistributionSpec DistributionSpec::Exponential(double rate) {
  return {DistFamily::kExponential, rate, 0.0};
}
DistributionSpec DistributionSpec::Lognormal(double mu, double sigma) {
  return {DistFamily::kLognormal, mu, sigma};
}
DistributionSpec DistributionSpec::Normal(double mu, double sigma) {
  return {DistFamily::kNormal, mu, sigma};
}
DistributionSpec DistributionSpec::Cauchy(double location, double scale) {
  return {DistFamily::kCauchy, location, scale};
}
DistributionSpec DistributionSpec::ExtremeValue(double location,
                                                double scale) {
  return {DistFamily::kExtremeValue, location, scale};
}
DistributionSpec DistributionSpec::Gamma(double shape, double scale) {
  return {DistFamily::kGamma, shape, scale};
}

const std::array<DistributionSpec, 8>& DistributionSpec::Catalog() {
  static const std::array<DistributionSpec, 8> kCatalog = {
      Uniform(),   ChiSquare(), Exponential(),  Lognormal(),
      Normal(),    Cauchy(),    ExtremeValue(), Gamma(),
  };
  return kCatalog;
}

DistributionSpec DistributionSpec::FromLabel(std::string_view label) {
  const std::string key = LowerNoSeparators(label);
  if (key.size() == 2 && key[0] == 'd' && key[1] >= '1' && key[1] <= '8') {
    return Catalog()[static_cast<std::size_t>(key[1] - '1')];
  }
  if (key == "uniform") return Uniform();
  if (key == "chisquare") return ChiSquare();
  if (key == "exponential") return Exponential();
  if (key == "lognormal") return Lognormal();
  if (key == "normal") return Normal();
  if (key == "cauchy") return Cauchy();
  if (key == "extremevalue" || key == "gumbel") return ExtremeValue();
  if (key == "gamma") return Gamma();
  throw std::invalid_argument("unknown distribution: " + std::string(label));
}

std::string_view DistributionSpec::name() const {
  switch (family) {
    case DistFamily::kUniform:      return "uniform";
    case DistFamily::kChiSquare:    return "chisquare";
    case DistFamily::kExponential:  return "exponential";
    case DistFamily::kLognormal:    return "lognormal";
    case DistFamily::kNormal:       return "normal";
    case DistFamily::kCauchy:       return "cauchy";
    case DistFamily::kExtremeValue: return "extremevalue";
    case DistFamily::kGamma:        return "gamma";
  }
  return "unknown";
}

void DistributionSpec::Validate() const {
  const auto require = [this](bool ok, const char* what) {
    if (!ok) {
      throw std::invalid_argument(std::string(name()) + ": " + what);
    }
  };
  require(std::isfinite(a), "first parameter must be finite");
  switch (family) {
    case DistFamily::kUniform:
      require(std::isfinite(b) && a < b, "requires lo < hi");
      break;
    case DistFamily::kChiSquare:
      require(a > 0.0, "degrees of freedom must be positive");
      break;
    case DistFamily::kExponential:
      require(a > 0.0, "rate must be positive");
      break;
    case DistFamily::kLognormal:
    case DistFamily::kNormal:
    case DistFamily::kCauchy:
    case DistFamily::kExtremeValue:
      require(std::isfinite(b) && b > 0.0, "scale must be positive");
      break;
    case DistFamily::kGamma:
      require(a > 0.0 && std::isfinite(b) && b > 0.0,
              "shape and scale must be positive");
      break;
  }
}

double SampleStandardNormal(Rng& rng) {
  while (true) {
    const double x = 2.0 * rng.NextUniform() - 1.0;
    const double y = 2.0 * rng.NextUniform() - 1.0;
    const double r2 = x * x + y * y;
    if (r2 >= 1.0 || r2 == 0.0) continue;
    return x * std::sqrt(-2.0 * std::log(r2) / r2);
  }
}

double SampleGamma(double shape, double scale, Rng& rng) {
  if (shape < 1.0) {
    // Gamma(shape) = Gamma(shape + 1) * U^(1/shape).
    const double u = rng.NextUniform();
    return SampleGamma(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = SampleStandardNormal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.NextUniform();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v * scale;
    }
  }
}

double DistributionSpec::Sample(Rng& rng) const {
  switch (family) {
    case DistFamily::kUniform:
      return a + (b - a) * rng.NextUniform();
    case DistFamily::kChiSquare:
      return SampleGamma(a / 2.0, 2.0, rng);
    case DistFamily::kExponential:
      // u in [0,1) keeps the argument of log1p inside (-1, 0].
      return -std::log1p(-rng.NextUniform()) / a;
    case DistFamily::kLognormal:
      return std::exp(a + b * SampleStandardNormal(rng));
    case DistFamily::kNormal:
      return a + b * SampleStandardNormal(rng);
    case DistFamily::kCauchy:
      return a + b * std::tan(std::numbers::pi * (rng.NextUniform() - 0.5));
    case DistFamily::kExtremeValue:
      return a - b * std::log(-std::log(rng.NextUniform()));
    case DistFamily::kGamma:
      return SampleGamma(a, b, rng);
  }
  throw std::logic_error("unreachable");
}

StreamGenerator::StreamGenerator(const DistributionSpec& spec,
                                 QuantizationScheme scheme, std::uint64_t seed)
    : spec_(spec), scheme_(scheme), rng_(seed) {
  spec_.Validate();
}

GeneratedStream Generate(const DistributionSpec& spec, std::uint64_t n,
                         std::uint64_t seed, QuantizationScheme scheme) {
  if (n == 0) {
    throw std::invalid_argument("stream length must be at least 1");
  }
  StreamGenerator gen(spec, scheme, seed);
  GeneratedStream out;
  out.items.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    out.items.push_back(gen.Next());
  }
  out.seed = seed;
  out.spec = spec;
  out.scheme = scheme;
  out.saturation_count = gen.saturation_count();
  return out;
}

}  // namespace frugaldp
