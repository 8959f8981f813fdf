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

#include "frugaldp/mechanisms.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "frugaldp/erfc_inv.h"

namespace frugaldp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite and positive");
  }
}

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

void CheckRho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("rho must be finite and positive");
  }
}

void CheckBeta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("beta must lie in (0, 1)");
  }
}

// -sqrt(2) * erfcinv(2(1-beta)); the standard normal quantile at 1-beta,
// positive for beta < 1/2.
double NormalTailFactor(double beta) {
  constexpr double kSqrt2 = 1.4142135623730950488;
  return -kSqrt2 * ErfcInv(2.0 * (1.0 - beta));
}

}  // namespace

PrivacySpec PrivacySpec::Laplace(double epsilon) {
  CheckEpsilon(epsilon);
  return PrivacySpec(MechanismKind::kLaplace, epsilon, kNaN, kNaN);
}

PrivacySpec PrivacySpec::Gaussian(double epsilon, double delta) {
  CheckEpsilon(epsilon);
  CheckDelta(delta);
  return PrivacySpec(MechanismKind::kGaussian, epsilon, delta, kNaN);
}

PrivacySpec PrivacySpec::Zcdp(double rho) {
  CheckRho(rho);
  return PrivacySpec(MechanismKind::kZcdp, kNaN, kNaN, rho);
}

double PrivacySpec::NoiseScale() const {
  const double s = sensitivity();
  switch (kind_) {
    case MechanismKind::kLaplace:
      return s / epsilon_;
    case MechanismKind::kGaussian:
      return s * std::sqrt(2.0 * std::log(1.25 / delta_)) / epsilon_;
    case MechanismKind::kZcdp:
      return s / std::sqrt(2.0 * rho_);
  }
  throw std::logic_error("unreachable");
}

std::string_view PrivacySpec::label() const {
  switch (kind_) {
    case MechanismKind::kLaplace:
      return "laplace";
    case MechanismKind::kGaussian:
      return "gauss";
    case MechanismKind::kZcdp:
      return "zcdp";
  }
  throw std::logic_error("unreachable");
}

double LaplaceInverseCdf(double centered_u, double scale) {
  const double sign = centered_u > 0.0 ? 1.0 : (centered_u < 0.0 ? -1.0 : 0.0);
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(centered_u));
}

double LaplaceNoise(double scale, Rng& rng) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("Laplace scale must be positive");
  }
  // Redraw the measure-zero u == 0 so the centered uniform stays inside
  // (-1/2, 1/2) and the transform never hits log(0).
  double u = rng.NextUniform();
  while (u == 0.0) u = rng.NextUniform();
  return LaplaceInverseCdf(u - 0.5, scale);
}

double GaussianNoise(double sigma, Rng& rng) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("Gaussian sigma must be positive");
  }
  while (true) {
    const double a = 2.0 * rng.NextUniform() - 1.0;
    const double b = 2.0 * rng.NextUniform() - 1.0;
    const double r2 = a * a + b * b;
    if (r2 >= 1.0 || r2 == 0.0) continue;
    return sigma * a * std::sqrt(-2.0 * std::log(r2) / r2);
  }
}

double Privatize(std::int64_t estimate, const PrivacySpec& spec, Rng& rng) {
  const double noise = spec.kind() == MechanismKind::kLaplace
                           ? LaplaceNoise(spec.NoiseScale(), rng)
                           : GaussianNoise(spec.NoiseScale(), rng);
  return static_cast<double>(estimate) + noise;
}

AccuracyBound LaplaceAccuracy(double beta, double epsilon,
                              double sensitivity) {
  CheckBeta(beta);
  CheckEpsilon(epsilon);
  return {std::log(1.0 / beta) * (sensitivity / epsilon), beta};
}

AccuracyBound GaussianAccuracy(double beta, double epsilon, double delta,
                               double sensitivity) {
  CheckBeta(beta);
  CheckEpsilon(epsilon);
  CheckDelta(delta);
  const double sigma =
      std::sqrt(2.0 * sensitivity * sensitivity * std::log(1.25 / delta) /
                (epsilon * epsilon));
  return {NormalTailFactor(beta) * sigma, beta};
}

AccuracyBound ZcdpAccuracy(double beta, double rho, double sensitivity) {
  CheckBeta(beta);
  CheckRho(rho);
  const double sigma = std::sqrt(sensitivity * sensitivity / (2.0 * rho));
  return {NormalTailFactor(beta) * sigma, beta};
}

double ZcdpToApproxDpEpsilon(double rho, double delta) {
  CheckRho(rho);
  CheckDelta(delta);
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

}  // namespace frugaldp
