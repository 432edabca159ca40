// Copyright 2026 The ctrace Authors
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

#ifndef CTRACE_RANDOM_H_
#define CTRACE_RANDOM_H_

#include <cstdint>
#include <random>

namespace ctrace {

// SplitMix64 output function (Steele, Lea, Flood).
constexpr uint64_t SplitMix64Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stable per-stream seed: the (index + 1)-th SplitMix64 output of a generator
// started at master_seed. Trial i of every Monte Carlo estimate and scenario
// replicate i of a batch use DeriveSeed(master_seed, i).
constexpr uint64_t DeriveSeed(uint64_t master_seed, uint64_t index) {
  return SplitMix64Mix(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi].
inline int64_t UniformInt(Rng& rng, int64_t lo, int64_t hi) {
  return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

}  // namespace ctrace

#endif  // CTRACE_RANDOM_H_
