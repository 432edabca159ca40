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


#include "ctrace/kernels.h"

#include <cstdint>
#include <random>
#include <vector>

#include "ctrace/epi_analytics.h"
#include "gtest/gtest.h"

namespace ctrace::kernels {
namespace {

// Sizes straddling the 4-lane width, including the empty and tail cases.
constexpr int kSizes[] = {0, 1, 3, 4, 5, 7, 8, 9, 31, 64, 1001};

class KernelEquivalenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!Avx2Supported()) GTEST_SKIP() << "CPU without AVX2";
  }
  std::mt19937_64 rng_{21};
};

#if defined(CTRACE_HAVE_AVX2)

TEST_F(KernelEquivalenceTest, UpperBoundBatchBitIdentical) {
  std::uniform_real_distribution<double> r0_dist(1.01, 20.0);
  std::uniform_real_distribution<double> nu_dist(1e-6, 1.0);
  int cases = 0;
  for (int round = 0; round < 100; ++round) {
    for (int n : kSizes) {
      const double r0 = r0_dist(rng_);
      std::vector<double> nu(n);
      for (double& v : nu) v = nu_dist(rng_);
      std::vector<double> a(n, -1), b(n, -2);
      scalar::UpperBoundBatch(r0, nu, a);
      avx2::UpperBoundBatch(r0, nu, b);
      ASSERT_EQ(a, b) << "n=" << n << " r0=" << r0;
      ++cases;
    }
  }
  EXPECT_GE(cases, 1000);
}

TEST_F(KernelEquivalenceTest, TracedBracketBatchBitIdentical) {
  std::uniform_real_distribution<double> unit(1e-6, 1.0);
  for (int round = 0; round < 100; ++round) {
    for (int n : kSizes) {
      const double nu = unit(rng_);
      const double pi0 = 0.5 * unit(rng_);
      std::vector<double> p(n);
      for (double& v : p) v = unit(rng_);
      std::vector<double> lo_a(n), hi_a(n), lo_b(n), hi_b(n);
      scalar::TracedBracketBatch(nu, pi0, p, lo_a, hi_a);
      avx2::TracedBracketBatch(nu, pi0, p, lo_b, hi_b);
      ASSERT_EQ(lo_a, lo_b);
      ASSERT_EQ(hi_a, hi_b);
    }
  }
}

TEST_F(KernelEquivalenceTest, OverlapMaskIdenticalIncludingTouchingEnds) {
  std::uniform_int_distribution<int64_t> t(0, 200);
  for (int round = 0; round < 100; ++round) {
    for (int n : kSizes) {
      std::vector<int64_t> start(n), end(n);
      for (int i = 0; i < n; ++i) {
        start[i] = t(rng_);
        end[i] = start[i] + t(rng_) / 10;
      }
      const int64_t qb = t(rng_);
      const int64_t qe = qb + t(rng_) / 4;
      std::vector<uint8_t> a(n, 7), b(n, 9);
      scalar::OverlapMask(start, end, qb, qe, a);
      avx2::OverlapMask(start, end, qb, qe, b);
      ASSERT_EQ(a, b);
      for (int i = 0; i < n; ++i) {
        ASSERT_EQ(a[i], (start[i] <= qe && end[i] >= qb) ? 1 : 0);
      }
    }
  }
}

TEST_F(KernelEquivalenceTest, OverlapMaskHandlesExtremeTimes) {
  const std::vector<int64_t> start = {INT64_MIN, -5, 0, INT64_MAX - 1, 3};
  const std::vector<int64_t> end = {INT64_MIN + 1, -1, 0, INT64_MAX, 3};
  for (auto [qb, qe] : std::vector<std::pair<int64_t, int64_t>>{
           {0, 0}, {-1, 3}, {INT64_MIN, INT64_MAX}, {4, INT64_MAX}}) {
    std::vector<uint8_t> a(start.size()), b(start.size());
    scalar::OverlapMask(start, end, qb, qe, a);
    avx2::OverlapMask(start, end, qb, qe, b);
    EXPECT_EQ(a, b) << qb << " " << qe;
  }
}

#endif  // CTRACE_HAVE_AVX2

TEST(KernelDispatchTest, SweepRowEqualsDirectCall) {
  for (double r0 : {1.5, 3.0, 4.0, 6.0, 11.0}) {
    std::vector<double> nu;
    for (int i = 1; i <= 199; ++i) nu.push_back(i / 200.0);
    std::vector<double> out(nu.size());
    UpperBoundBatch(r0, nu, out);
    for (size_t i = 0; i < nu.size(); ++i) {
      ASSERT_EQ(out[i], *UpperBoundAt(r0, nu[i])) << r0 << " " << nu[i];
    }
  }
}

TEST(KernelDispatchTest, ActiveIsaIsSupported) {
  const Isa isa = ActiveIsa();
  if (isa == Isa::kAvx2) {
    EXPECT_TRUE(Avx2Supported());
  }
  EXPECT_FALSE(IsaName(isa).empty());
}

}  // namespace
}  // namespace ctrace::kernels
