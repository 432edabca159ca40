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


#include "ctrace/format.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "ctrace/stats.h"
#include "gtest/gtest.h"

namespace ctrace {
namespace {

TEST(FormatFixed5Test, Basics) {
  EXPECT_EQ(FormatFixed5(0.0), "0.00000");
  EXPECT_EQ(FormatFixed5(-0.0), "0.00000");
  EXPECT_EQ(FormatFixed5(1.0), "1.00000");
  EXPECT_EQ(FormatFixed5(0.948653), "0.94865");
  EXPECT_EQ(FormatFixed5(20.0 / 21.0), "0.95238");
  EXPECT_EQ(FormatFixed5(-1.234567), "-1.23457");
  EXPECT_EQ(FormatFixed5(12345.5), "12345.50000");
}

TEST(FormatFixed5Test, ExactBinaryTiesRoundHalfEven) {
  // k / 2^6 has an exact 6-digit decimal expansion ending in 5.
  EXPECT_EQ(FormatFixed5(0.015625), "0.01562");
  EXPECT_EQ(FormatFixed5(0.046875), "0.04688");
  EXPECT_EQ(FormatFixed5(-0.015625), "-0.01562");
  EXPECT_EQ(FormatFixed5(1.000005), "1.00001");  // not a tie in binary
}

TEST(FormatFixed5Test, AgreesWithCorrectlyRoundedPrintf) {
  // glibc printf rounds the exact binary value with the current (nearest
  // even) mode, an independent path from std::to_chars.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  char buf[64];
  for (int i = 0; i < 5000; ++i) {
    double v = d(rng);
    if (i % 2 == 0) v = std::ldexp(std::round(std::ldexp(v, 10)), -10);
    std::snprintf(buf, sizeof(buf), "%.5f", v);
    std::string want = buf;
    if (want == "-0.00000") want = "0.00000";
    ASSERT_EQ(FormatFixed5(v), want) << v;
  }
}

TEST(WilsonIntervalTest, KnownValuesAndEdges) {
  // 50 of 100: center 0.5, half-width z sqrt(0.25/100 + z^2/40000)/(1+z^2/100)
  const Interval95 ci = WilsonInterval(50, 100);
  EXPECT_NEAR(ci.low, 0.40383153, 1e-6);
  EXPECT_NEAR(ci.high, 0.59616847, 1e-6);
  const Interval95 zero = WilsonInterval(0, 10);
  EXPECT_EQ(zero.low, 0.0);
  EXPECT_GT(zero.high, 0.0);
  const Interval95 all = WilsonInterval(10, 10);
  EXPECT_EQ(all.high, 1.0);
  EXPECT_LT(all.low, 1.0);
}

TEST(WilsonIntervalTest, ContainsPointEstimate) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 2000; ++i) {
    const int64_t n = 1 + rng() % 100000;
    const int64_t k = rng() % (n + 1);
    const Interval95 ci = WilsonInterval(k, n);
    const double phat = static_cast<double>(k) / static_cast<double>(n);
    ASSERT_LE(ci.low, phat);
    ASSERT_GE(ci.high, phat);
    ASSERT_GE(ci.low, 0.0);
    ASSERT_LE(ci.high, 1.0);
  }
}

TEST(MeanWithIntervalTest, SmallSampleUsesT) {
  const std::vector<double> v = {1.0, 2.0, 3.0};
  const MeanInterval m = MeanWithInterval(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_NEAR(m.high - m.mean, 4.303 * 1.0 / std::sqrt(3.0), 1e-12);
  const MeanInterval one = MeanWithInterval(std::vector<double>{5.0});
  EXPECT_EQ(one.low, 5.0);
  EXPECT_EQ(one.high, 5.0);
}

}  // namespace
}  // namespace ctrace
