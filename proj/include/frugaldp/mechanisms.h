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

#ifndef FRUGALDP_MECHANISMS_H_
#define FRUGALDP_MECHANISMS_H_

#include <cstdint>
#include <string_view>

#include "frugaldp/random.h"

namespace frugaldp {

// Worst-case change of the final frugal estimate when one stream item is
// replaced (coin sequences held fixed). All release paths calibrate noise to
// this constant; formula-level helpers below take sensitivity as a parameter
// so the formulas themselves stay testable at other values.
inline constexpr double kEstimateSensitivity = 2.0;

enum class MechanismKind { kLaplace, kGaussian, kZcdp };

// A validated choice of release mechanism with its privacy parameters.
//   Laplace:  pure epsilon-DP, noise Lap(0, s/epsilon)
//   Gaussian: (epsilon, delta)-DP, noise N(0, 2 s^2 ln(1.25/delta)/epsilon^2)
//   Zcdp:     rho-zCDP, noise N(0, s^2/(2 rho))
class PrivacySpec {
 public:
  static PrivacySpec Laplace(double epsilon);
  static PrivacySpec Gaussian(double epsilon, double delta);
  static PrivacySpec Zcdp(double rho);

  MechanismKind kind() const { return kind_; }
  // Parameters not used by the mechanism are NaN.
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double rho() const { return rho_; }
  double sensitivity() const { return kEstimateSensitivity; }

  // Laplace scale b, or Gaussian standard deviation sigma.
  double NoiseScale() const;

  std::string_view label() const;

 private:
  PrivacySpec(MechanismKind kind, double epsilon, double delta, double rho)
      : kind_(kind), epsilon_(epsilon), delta_(delta), rho_(rho) {}

  MechanismKind kind_;
  double epsilon_;
  double delta_;
  double rho_;
};

// Laplace(0, scale) inverse CDF at a centered uniform: for u in (-1/2, 1/2),
// returns -scale * sign(u) * ln(1 - 2|u|). This closed form is the sampling
// contract, so any implementation fed the same uniforms produces identical
// values.
double LaplaceInverseCdf(double centered_u, double scale);

// One draw from Laplace(0, scale) via the inverse CDF above. Throws
// std::invalid_argument on non-positive scale.
double LaplaceNoise(double scale, Rng& rng);

// One draw from N(0, sigma^2) via the Marsaglia polar method (exact
// distribution; no closed-form inverse CDF, so no bitwise contract). Throws
// std::invalid_argument on non-positive sigma.
double GaussianNoise(double sigma, Rng& rng);

// Adds calibrated release noise to a terminal estimate. Noise is added
// exactly once, after stream termination; injecting it earlier would be
// silently washed out by the estimator's convergence.
double Privatize(std::int64_t estimate, const PrivacySpec& spec, Rng& rng);

// An (alpha, beta) accuracy statement: the released value deviates from the
// true value by at least alpha with probability at most beta.
struct AccuracyBound {
  double alpha;
  double beta;
};

// alpha = ln(1/beta) * (sensitivity / epsilon).
AccuracyBound LaplaceAccuracy(double beta, double epsilon, double sensitivity);

// alpha = (-sqrt(2) erfcinv(2(1-beta))) * sqrt(2 s^2 ln(1.25/delta)) / epsilon.
AccuracyBound GaussianAccuracy(double beta, double epsilon, double delta,
                               double sensitivity);

// alpha = (-sqrt(2) erfcinv(2(1-beta))) * sqrt(s^2 / (2 rho)).
AccuracyBound ZcdpAccuracy(double beta, double rho, double sensitivity);

// epsilon = rho + 2 sqrt(rho * ln(1/delta)). Natural logarithm.
double ZcdpToApproxDpEpsilon(double rho, double delta);

}  // namespace frugaldp

#endif  // FRUGALDP_MECHANISMS_H_
