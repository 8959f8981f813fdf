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

#ifndef FRUGALDP_RANDOM_H_
#define FRUGALDP_RANDOM_H_

#include <cstdint>
#include <random>

namespace frugaldp {

// Purpose tags for deriving independent substreams from one master seed.
// Data draws, estimator coins and release noise must never share generator
// state, or coin-coupling arguments (and reproducibility) break down.
enum class StreamPurpose : std::uint64_t {
  kData = 1,            // synthetic stream draws
  kEstimatorCoins = 2,  // the per-item uniform coin of the estimator
  kNoise = 3,           // release-time mechanism noise
  kProbe = 4,           // sensitivity-probe streams, positions, replacements
};

// SplitMix64 finalizer.
constexpr std::uint64_t MixBits(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream seed for a (purpose, index) pair under a master seed.
constexpr std::uint64_t DeriveSeed(std::uint64_t master_seed,
                                   StreamPurpose purpose, std::uint64_t index) {
  return MixBits(MixBits(MixBits(master_seed) ^
                         static_cast<std::uint64_t>(purpose)) ^
                 index);
}

// Deterministic uniform source backed by mt19937_64. Equal seeds produce
// bit-identical sequences on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0,1) with 53 random mantissa bits. The value 0.0 occurs with
  // probability 2^-53 per draw.
  double NextUniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace frugaldp

#endif  // FRUGALDP_RANDOM_H_
