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

#include <cassert>
#include <cstddef>

#include "ctrace/kernels.h"

namespace ctrace::kernels::scalar {

void UpperBoundBatch(double r0, std::span<const double> nu,
                     std::span<double> out) {
  assert(out.size() >= nu.size());
  const double eps = 1.0 / r0;
  const double odds = eps / (1.0 - eps);
  for (size_t i = 0; i < nu.size(); ++i) {
    out[i] = UpperBoundFromOdds(odds, nu[i]);
  }
}

void TracedBracketBatch(double nu, double pi0, std::span<const double> p,
                        std::span<double> low, std::span<double> high) {
  assert(low.size() >= p.size() && high.size() >= p.size());
  const double pi1 = 1.0 - pi0;
  for (size_t i = 0; i < p.size(); ++i) {
    low[i] = TracedLowerFromP(nu, p[i]);
    high[i] = TracedUpperFromLow(pi0, pi1, p[i], low[i]);
  }
}

void OverlapMask(std::span<const int64_t> start, std::span<const int64_t> end,
                 int64_t q_begin, int64_t q_end, std::span<uint8_t> out) {
  assert(start.size() == end.size() && out.size() >= start.size());
  for (size_t i = 0; i < start.size(); ++i) {
    out[i] = (start[i] <= q_end && end[i] >= q_begin) ? 1 : 0;
  }
}

}  // namespace ctrace::kernels::scalar
