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


#include "ctrace/epi_analytics.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "reference_tables.h"

namespace ctrace {
namespace {

using ::ctrace::testing::BisectLowerBound;
using ::ctrace::testing::FixedPointPi0;
using ::ctrace::testing::kBoundsReference;
using ::ctrace::testing::kExtinctionReference;
using ::ctrace::testing::kTableTolerance;

constexpr int kPropertyCases = 2000;

DiseaseParams Params(double r0, double nu) {
  absl::StatusOr<DiseaseParams> p = DiseaseParams::Create(r0, nu);
  EXPECT_TRUE(p.ok()) << p.status();
  return *p;
}

ExtinctionResult Solve(double r0) {
  absl::StatusOr<ExtinctionResult> ext =
      SolveExtinction(OffspringDistribution::Poisson(r0));
  EXPECT_TRUE(ext.ok()) << ext.status();
  return *ext;
}

TEST(DiseaseParamsTest, RejectsSubcriticalAndBadSeverity) {
  EXPECT_FALSE(DiseaseParams::Create(1.0, 0.1).ok());
  EXPECT_FALSE(DiseaseParams::Create(0.5, 0.1).ok());
  EXPECT_FALSE(DiseaseParams::Create(3.0, 0.0).ok());
  EXPECT_FALSE(DiseaseParams::Create(3.0, 1.0).ok());
  EXPECT_FALSE(DiseaseParams::Create(NAN, 0.1).ok());
  EXPECT_DOUBLE_EQ(Params(4, 0.1).epsilon(), 0.25);
}

TEST(SolveExtinctionTest, MatchesExtinctionTable) {
  for (const auto& ref : kExtinctionReference) {
    const ExtinctionResult ext = Solve(ref.r0);
    EXPECT_NEAR(ext.pi0, ref.pi0, kTableTolerance) << "r0=" << ref.r0;
    EXPECT_NEAR(ext.pi1, ref.pi1, kTableTolerance) << "r0=" << ref.r0;
    EXPECT_NEAR(1.0 - 1.0 / ref.r0, ref.one_minus_eps, kTableTolerance);
  }
}

TEST(SolveExtinctionTest, MatchesFixedPointAtTwo) {
  const ExtinctionResult ext = Solve(2.0);
  EXPECT_NEAR(ext.pi0, FixedPointPi0(2.0), 1e-12);
  EXPECT_NEAR(ext.pi0, 0.20318786997998026, 1e-12);
}

TEST(SolveExtinctionTest, RejectsCriticalRegime) {
  absl::StatusOr<ExtinctionResult> ext =
      SolveExtinction(OffspringDistribution::Poisson(1.0));
  ASSERT_FALSE(ext.ok());
  EXPECT_EQ(ext.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(std::string(ext.status().message()).find("supercritical"),
            std::string::npos);
  EXPECT_FALSE(SolveExtinction(OffspringDistribution::Deterministic(3)).ok());
}

TEST(SolveExtinctionTest, RootResidualAndOracleOnRandomR0) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r0_dist(1.05, 12.0);
  for (int i = 0; i < kPropertyCases; ++i) {
    const double r0 = r0_dist(rng);
    const ExtinctionResult ext = Solve(r0);
    ASSERT_LE(ExtinctionResidual(r0, ext.pi0), 1e-12) << "r0=" << r0;
    ASSERT_GT(ext.pi0, 0.0);
    ASSERT_LT(ext.pi0, 1.0 / r0);
    ASSERT_DOUBLE_EQ(ext.pi0 + ext.pi1, 1.0);
    ASSERT_NEAR(ext.pi0, FixedPointPi0(r0), 1e-9 * std::max(1.0, ext.pi0))
        << "r0=" << r0;
  }
}

TEST(MuKTest, ValuesAndMonotonicity) {
  absl::StatusOr<double> mu = MuK(0.05, 20);
  ASSERT_TRUE(mu.ok());
  EXPECT_NEAR(*mu, 1.0 - std::pow(0.95, 20), 1e-15);
  EXPECT_NEAR(*MuK(0.1, 1), 0.1, 1e-16);
  EXPECT_FALSE(MuK(0.1, 0).ok());
  EXPECT_FALSE(MuK(0.0, 3).ok());
  double prev = 0.0;
  for (int64_t k = 1; k <= 200; ++k) {
    const double m = *MuK(0.02, k);
    EXPECT_GT(m, prev);
    prev = m;
  }
}

TEST(UpperBoundTest, ClosedForm) {
  EXPECT_NEAR(UpperBound(Params(3, 0.1)), 20.0 / 21.0, 1e-15);
  EXPECT_TRUE(UpperBoundAt(3, 1.0).ok());
  EXPECT_NEAR(*UpperBoundAt(3, 1.0), 2.0 / 3.0, 1e-15);
  EXPECT_FALSE(UpperBoundAt(3, 0.0).ok());
  EXPECT_FALSE(UpperBoundAt(0.9, 0.5).ok());
}

TEST(LowerBoundTest, MatchesBoundsTable) {
  for (const auto& ref : kBoundsReference) {
    absl::StatusOr<AdoptionBounds> b = ComputeBounds(Params(ref.r0, ref.nu));
    ASSERT_TRUE(b.ok()) << b.status();
    EXPECT_NEAR(b->p_lower, ref.p_lower, kTableTolerance)
        << "nu=" << ref.nu << " r0=" << ref.r0;
    EXPECT_NEAR(b->p_upper, ref.p_upper, kTableTolerance)
        << "nu=" << ref.nu << " r0=" << ref.r0;
  }
}

TEST(LowerBoundTest, SignChangeOnFineGrid) {
  // Scan the quadratic on a 1e-6 grid: it changes sign exactly once, next to
  // the computed root.
  const DiseaseParams params = Params(3, 0.1);
  const ExtinctionResult ext = Solve(3);
  const double root = *LowerBound(params, ext);
  int changes = 0;
  double crossing = 0.0;
  double prev = LowerBoundQuadratic(params, ext, 0.9);
  for (int i = 1; i <= 100000; ++i) {
    const double p = 0.9 + i * 1e-6;
    const double v = LowerBoundQuadratic(params, ext, p);
    if ((prev > 0) != (v > 0)) {
      ++changes;
      crossing = p;
    }
    prev = v;
  }
  EXPECT_EQ(changes, 1);
  EXPECT_GT(root, crossing - 1e-6);
  EXPECT_LE(root, crossing);
}

TEST(LowerBoundTest, RejectsForeignExtinctionResult) {
  EXPECT_FALSE(LowerBound(Params(3, 0.1), Solve(4)).ok());
}

TEST(LowerBoundTest, PropertiesOnRandomParams) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> r0_dist(1.05, 12.0);
  std::uniform_real_distribution<double> nu_dist(1e-3, 0.999);
  for (int i = 0; i < kPropertyCases; ++i) {
    const double r0 = r0_dist(rng);
    const double nu = nu_dist(rng);
    const DiseaseParams params = Params(r0, nu);
    const ExtinctionResult ext = Solve(r0);
    absl::StatusOr<double> lower = LowerBound(params, ext);
    ASSERT_TRUE(lower.ok()) << lower.status();
    const double upper = UpperBound(params);
    ASSERT_GT(*lower, 0.0);
    ASSERT_LE(*lower, upper + 1e-15) << "r0=" << r0 << " nu=" << nu;
    ASSERT_NEAR(LowerBoundQuadratic(params, ext, 1.0), -nu / r0, 1e-12);
    ASSERT_NEAR(*lower, BisectLowerBound(r0, nu, ext.pi0), 1e-12)
        << "r0=" << r0 << " nu=" << nu;
  }
}

TEST(TracedBracketTest, ClosedFormAtReferencePoint) {
  const DiseaseParams params = Params(3, 0.1);
  const ExtinctionResult ext = Solve(3);
  absl::StatusOr<TracedBracket> b = AnalyticTracedBracket(params, ext, 0.95);
  ASSERT_TRUE(b.ok());
  const double low = 0.1 * 0.95 / (1 - 0.95 * 0.9);
  EXPECT_NEAR(b->low, low, 1e-15);
  EXPECT_NEAR(b->low, 0.6551724137931034, 1e-15);
  EXPECT_NEAR(b->high, 0.95 * ext.pi0 + ext.pi1 * low, 1e-15);
  EXPECT_NEAR(b->high, 0.6727206134293818, 1e-12);
  EXPECT_FALSE(AnalyticTracedBracket(params, ext, 0.0).ok());
  EXPECT_FALSE(AnalyticTracedBracket(params, ext, 1.5).ok());
}

TEST(TracedBracketTest, LowEndReachesThresholdAtUpperBound) {
  // p_upper is where the bracket's low end alone gives r0 (1 - low) = 1.
  for (const auto& ref : kBoundsReference) {
    const DiseaseParams params = Params(ref.r0, ref.nu);
    const ExtinctionResult ext = Solve(ref.r0);
    const double pu = UpperBound(params);
    const TracedBracket b = *AnalyticTracedBracket(params, ext, pu);
    EXPECT_NEAR(b.low, 1.0 - params.epsilon(), 1e-12);
    EXPECT_NEAR(EffectiveR(params, b.low), 1.0, 1e-12);
  }
}

TEST(LemmaRatioTest, FirstTermAndLimit) {
  EXPECT_NEAR(LemmaRatio(0.9, 0.1, 1), (1 - 0.9 * 0.9) / 0.1, 1e-13);
  EXPECT_NEAR(LemmaRatio(0.9, 0.1, 5000), 1.0, 1e-15);
}

TEST(LemmaRatioTest, StrictlyDecreasingOnRandomParams) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> p_dist(0.01, 0.999);
  std::uniform_real_distribution<double> nu_dist(1e-3, 0.999);
  for (int i = 0; i < kPropertyCases; ++i) {
    const double p = p_dist(rng);
    const double nu = nu_dist(rng);
    double prev_excess = LogLemmaRatioExcess(p, nu, 1);
    double prev_ratio = LemmaRatio(p, nu, 1);
    ASSERT_NEAR(std::exp(prev_excess), prev_ratio - 1.0,
                1e-9 * prev_ratio);
    for (int64_t k = 2; k <= 1000; ++k) {
      const double excess = LogLemmaRatioExcess(p, nu, k);
      const double ratio = LemmaRatio(p, nu, k);
      ASSERT_LT(excess, prev_excess) << "p=" << p << " nu=" << nu << " k=" << k;
      // The direct quotient rounds; it may only wobble by a few ulps.
      ASSERT_LE(ratio, prev_ratio * (1 + 4e-16));
      ASSERT_GE(ratio, 1.0);
      prev_excess = excess;
      prev_ratio = ratio;
    }
  }
}

TEST(SweepTest, OrderingMonotonicityAndTableAgreement) {
  const std::vector<double> r0s = {6, 3, 5, 4};
  std::vector<double> nus;
  for (int i = 0; i <= 180; ++i) nus.push_back(0.02 + 0.001 * i);
  absl::StatusOr<std::vector<SweepRow>> rows = SweepUpperBound(r0s, nus);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), r0s.size() * nus.size());
  for (size_t c = 0; c < 4; ++c) {
    for (size_t i = 0; i < nus.size(); ++i) {
      const SweepRow& row = (*rows)[c * nus.size() + i];
      EXPECT_EQ(row.r0, 3.0 + c);
      EXPECT_EQ(row.p_upper, UpperBound(Params(row.r0, row.nu)));
      if (i > 0) {
        EXPECT_LT(row.p_upper, (*rows)[c * nus.size() + i - 1].p_upper);
      }
      if (c > 0) {
        EXPECT_GT(row.p_upper, (*rows)[(c - 1) * nus.size() + i].p_upper);
      }
    }
  }
  EXPECT_FALSE(SweepUpperBound(r0s, std::vector<double>{}).ok());
  EXPECT_FALSE(SweepUpperBound(std::vector<double>{0.5}, nus).ok());
}

TEST(TablesTest, BoundsTableOrderAndCsv) {
  const std::vector<double> r0s = {3, 4};
  const std::vector<double> nus = {0.1, 0.05};
  absl::StatusOr<std::vector<BoundsRow>> rows = BoundsTable(r0s, nus);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), 4u);
  EXPECT_EQ((*rows)[1].r0, 4);
  EXPECT_EQ((*rows)[1].nu, 0.1);
  EXPECT_EQ((*rows)[2].r0, 3);
  EXPECT_EQ((*rows)[2].nu, 0.05);
  const std::string csv = BoundsCsv(*rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r0,nu,p_lower,p_upper");
  EXPECT_NE(csv.find("3.00000,0.10000,0.94865,0.95238\n"), std::string::npos);
}

TEST(TablesTest, ExtinctionCsv) {
  const std::vector<double> r0s = {3, 4, 5, 6};
  absl::StatusOr<std::vector<ExtinctionRow>> rows = ExtinctionTable(r0s);
  ASSERT_TRUE(rows.ok());
  EXPECT_EQ(ExtinctionCsv(*rows),
            "r0,pi0,pi1,one_minus_eps\n"
            "3.00000,0.05952,0.94048,0.66667\n"
            "4.00000,0.01983,0.98017,0.75000\n"
            "5.00000,0.00698,0.99302,0.80000\n"
            "6.00000,0.00252,0.99748,0.83333\n");
  EXPECT_FALSE(ExtinctionTable(std::vector<double>{3, 1}).ok());
}

}  // namespace
}  // namespace ctrace
