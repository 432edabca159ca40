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

#include <immintrin.h>

#include <cassert>
#include <cstddef>

#include "ctrace/kernels.h"

// Compiled with -mavx2; reached only through the runtime dispatcher.
namespace ctrace::kernels::avx2 {

void UpperBoundBatch(double r0, std::span<const double> nu,
                     std::span<double> out) {
  assert(out.size() >= nu.size());
  const double eps = 1.0 / r0;
  const double odds = eps / (1.0 - eps);
  const __m256d v_odds = _mm256_set1_pd(odds);
  const __m256d v_one = _mm256_set1_pd(1.0);
  size_t i = 0;
  for (; i + 4 <= nu.size(); i += 4) {
    __m256d v_nu = _mm256_loadu_pd(nu.data() + i);
    __m256d denom = _mm256_add_pd(v_one, _mm256_mul_pd(v_odds, v_nu));
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(v_one, denom));
  }
  for (; i < nu.size(); ++i) out[i] = UpperBoundFromOdds(odds, nu[i]);
}

void TracedBracketBatch(double nu, double pi0, std::span<const double> p,
                        std::span<double> low, std::span<double> high) {
  assert(low.size() >= p.size() && high.size() >= p.size());
  const double pi1 = 1.0 - pi0;
  const __m256d v_nu = _mm256_set1_pd(nu);
  const __m256d v_miss = _mm256_set1_pd(1.0 - nu);
  const __m256d v_one = _mm256_set1_pd(1.0);
  const __m256d v_pi0 = _mm256_set1_pd(pi0);
  const __m256d v_pi1 = _mm256_set1_pd(pi1);
  size_t i = 0;
  for (; i + 4 <= p.size(); i += 4) {
    __m256d v_p = _mm256_loadu_pd(p.data() + i);
    __m256d num = _mm256_mul_pd(v_nu, v_p);
    __m256d den = _mm256_sub_pd(v_one, _mm256_mul_pd(v_p, v_miss));
    __m256d v_low = _mm256_div_pd(num, den);
    __m256d v_high =
        _mm256_add_pd(_mm256_mul_pd(v_p, v_pi0), _mm256_mul_pd(v_pi1, v_low));
    _mm256_storeu_pd(low.data() + i, v_low);
    _mm256_storeu_pd(high.data() + i, v_high);
  }
  for (; i < p.size(); ++i) {
    low[i] = TracedLowerFromP(nu, p[i]);
    high[i] = TracedUpperFromLow(pi0, pi1, p[i], low[i]);
  }
}

void OverlapMask(std::span<const int64_t> start, std::span<const int64_t> end,
                 int64_t q_begin, int64_t q_end, std::span<uint8_t> out) {
  assert(start.size() == end.size() && out.size() >= start.size());
  // start <= q_end  <=>  !(start > q_end); end >= q_begin  <=>  !(q_begin > end)
  const __m256i v_qend = _mm256_set1_epi64x(q_end);
  const __m256i v_qbegin = _mm256_set1_epi64x(q_begin);
  size_t i = 0;
  for (; i + 4 <= start.size(); i += 4) {
    __m256i s = _mm256_loadu_si256(
        reinterpret_cast<const __m256i*>(start.data() + i));
    __m256i e =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(end.data() + i));
    __m256i miss = _mm256_or_si256(_mm256_cmpgt_epi64(s, v_qend),
                                   _mm256_cmpgt_epi64(v_qbegin, e));
    int bits = _mm256_movemask_pd(_mm256_castsi256_pd(miss));
    for (int lane = 0; lane < 4; ++lane) {
      out[i + lane] = ((bits >> lane) & 1) ? 0 : 1;
    }
  }
  for (; i < start.size(); ++i) {
    out[i] = (start[i] <= q_end && end[i] >= q_begin) ? 1 : 0;
  }
}

}  // namespace ctrace::kernels::avx2
