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

#ifndef CTRACE_KERNELS_H_
#define CTRACE_KERNELS_H_

#include <cstdint>
#include <span>
#include <string_view>

// Batch kernels for the data-parallel parts of the toolkit: closed-form bound
// evaluation over parameter grids and interval-overlap scans. Every kernel has
// a scalar reference and an AVX2 variant; the dispatching entry points pick
// one at runtime. Both variants perform the same IEEE operations in the same
// order, so results are bit-identical.
namespace ctrace::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// True when the running CPU supports AVX2.
bool Avx2Supported();

// The variant the dispatching functions use. Honors CTRACE_FORCE_SCALAR=1.
Isa ActiveIsa();

// p_upper = 1 / (1 + odds * nu) with odds = eps / (1 - eps). Shared by the
// single-value path so a sweep row equals a direct call exactly.
inline double UpperBoundFromOdds(double odds, double nu) {
  return 1.0 / (1.0 + odds * nu);
}

// Lower end of the P(X=0) bracket: nu p / (1 - p (1 - nu)).
inline double TracedLowerFromP(double nu, double p) {
  return (nu * p) / (1.0 - p * (1.0 - nu));
}

// Upper end of the P(X=0) bracket: p pi0 + pi1 low.
inline double TracedUpperFromLow(double pi0, double pi1, double p,
                                 double low) {
  return p * pi0 + pi1 * low;
}

// out[i] = UpperBoundFromOdds(odds(r0), nu[i]).
void UpperBoundBatch(double r0, std::span<const double> nu,
                     std::span<double> out);

// low[i], high[i] = P(X=0) bracket at adoption rate p[i].
void TracedBracketBatch(double nu, double pi0, std::span<const double> p,
                        std::span<double> low, std::span<double> high);

// out[i] = 1 iff the closed interval [start[i], end[i]] meets
// [q_begin, q_end], else 0.
void OverlapMask(std::span<const int64_t> start, std::span<const int64_t> end,
                 int64_t q_begin, int64_t q_end, std::span<uint8_t> out);

namespace scalar {
void UpperBoundBatch(double r0, std::span<const double> nu,
                     std::span<double> out);
void TracedBracketBatch(double nu, double pi0, std::span<const double> p,
                        std::span<double> low, std::span<double> high);
void OverlapMask(std::span<const int64_t> start, std::span<const int64_t> end,
                 int64_t q_begin, int64_t q_end, std::span<uint8_t> out);
}  // namespace scalar

// Only callable when Avx2Supported().
namespace avx2 {
void UpperBoundBatch(double r0, std::span<const double> nu,
                     std::span<double> out);
void TracedBracketBatch(double nu, double pi0, std::span<const double> p,
                        std::span<double> low, std::span<double> high);
void OverlapMask(std::span<const int64_t> start, std::span<const int64_t> end,
                 int64_t q_begin, int64_t q_end, std::span<uint8_t> out);
}  // namespace avx2

}  // namespace ctrace::kernels

#endif  // CTRACE_KERNELS_H_
