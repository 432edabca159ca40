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


#include "ctrace/cluster_mc.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ctrace/random.h"
#include "ctrace/stats.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace ctrace {
namespace {

using ::ctrace::testing::ExactTracedProbability;
using ::ctrace::testing::FixedPointPi0;

DiseaseParams Params(double r0, double nu) {
  return *DiseaseParams::Create(r0, nu);
}

ClusterOptions Full(FiniteClusterRule rule = FiniteClusterRule::kConditionOnDetection) {
  ClusterOptions o;
  o.mode = SimulationMode::kFullCluster;
  o.finite_rule = rule;
  return o;
}

ClusterOptions Fast(FiniteClusterRule rule = FiniteClusterRule::kConditionOnDetection) {
  ClusterOptions o = Full(rule);
  o.mode = SimulationMode::kUntilDecided;
  return o;
}

TEST(SimulateClusterTest, SameSeedSameOutcome) {
  const DiseaseParams params = Params(3, 0.1);
  ClusterOptions o = Full();
  o.record_nodes = true;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    ClusterOutcome a =
        *SimulateCluster(params, OffspringDistribution::Poisson(3), 0.9, seed, o);
    ClusterOutcome b =
        *SimulateCluster(params, OffspringDistribution::Poisson(3), 0.9, seed, o);
    ASSERT_EQ(a.size, b.size);
    ASSERT_EQ(a.traced, b.traced);
    ASSERT_EQ(a.detection_index, b.detection_index);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    for (size_t i = 0; i < a.nodes.size(); ++i) {
      ASSERT_EQ(a.nodes[i].parent, b.nodes[i].parent);
      ASSERT_EQ(a.nodes[i].adopter, b.nodes[i].adopter);
      ASSERT_EQ(a.nodes[i].severe, b.nodes[i].severe);
    }
  }
}

TEST(SimulateClusterTest, RecordedNodesAreBreadthFirstAndConsistent) {
  const DiseaseParams params = Params(1.5, 0.05);
  ClusterOptions o = Full(FiniteClusterRule::kLiteral);
  o.record_nodes = true;
  o.cap = 2000;
  for (uint64_t seed = 0; seed < 500; ++seed) {
    const ClusterOutcome out = *SimulateCluster(
        params, OffspringDistribution::Poisson(1.5), 0.8, seed, o);
    ASSERT_EQ(static_cast<int64_t>(out.nodes.size()), out.size);
    ASSERT_FALSE(out.nodes[0].parent.has_value());
    std::optional<int64_t> first_severe;
    bool prefix = true;
    bool traced = false;
    for (const InfectionNode& n : out.nodes) {
      if (n.id > 0) {
        ASSERT_TRUE(n.parent.has_value());
        ASSERT_LT(*n.parent, n.id);
      }
      if (!first_severe) {
        prefix = prefix && n.adopter;
        if (n.severe) {
          first_severe = n.id + 1;
          traced = prefix;
        }
      }
    }
    ASSERT_EQ(out.detection_index, first_severe);
    ASSERT_EQ(out.traced, traced);
    ASSERT_EQ(out.extinct, !out.truncated);
  }
}

TEST(SimulateClusterTest, UntilDecidedAgreesWithFullCluster) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (FiniteClusterRule rule :
       {FiniteClusterRule::kConditionOnDetection, FiniteClusterRule::kLiteral}) {
    for (int i = 0; i < 1500; ++i) {
      const double r0 = 1.2 + 4.0 * unit(rng);
      const double nu = 0.01 + 0.5 * unit(rng);
      const double p = unit(rng);
      const uint64_t seed = rng();
      const DiseaseParams params = Params(r0, nu);
      const auto dist = OffspringDistribution::Poisson(r0);
      const ClusterOutcome full = *SimulateCluster(params, dist, p, seed, Full(rule));
      const ClusterOutcome fast = *SimulateCluster(params, dist, p, seed, Fast(rule));
      ASSERT_EQ(full.traced, fast.traced) << "case " << i;
      if (fast.detection_index.has_value()) {
        ASSERT_EQ(fast.detection_index, full.detection_index);
      }
      ASSERT_LE(fast.size, full.size);
    }
  }
}

TEST(SimulateClusterTest, SingletonTracedWithFrequencyNuUnderLiteralRule) {
  const double nu = 0.1;
  const DiseaseParams params = Params(3, nu);
  const auto singleton = OffspringDistribution::Deterministic(0);
  const int64_t n = 20000;
  int64_t traced = 0;
  for (int64_t i = 0; i < n; ++i) {
    const ClusterOutcome out = *SimulateCluster(
        params, singleton, 1.0, DeriveSeed(9, i), Full(FiniteClusterRule::kLiteral));
    ASSERT_EQ(out.size, 1);
    traced += out.traced;
  }
  const Interval95 ci = WilsonInterval(traced, n);
  EXPECT_LE(ci.low, nu);
  EXPECT_GE(ci.high, nu);
}

TEST(SimulateClusterTest, SingletonUnderConditionedRuleIsDetectedAtOne) {
  const DiseaseParams params = Params(3, 0.1);
  const auto singleton = OffspringDistribution::Deterministic(0);
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const ClusterOutcome out =
        *SimulateCluster(params, singleton, 1.0, seed, Full());
    ASSERT_EQ(out.detection_index, std::optional<int64_t>(1));
    ASSERT_TRUE(out.traced);
  }
}

TEST(SimulateClusterTest, ImputedDetectionFollowsTruncatedGeometric) {
  // Among extinct size-3 clusters with no realized severe member, Y must
  // follow (1 - nu)^(j-1) nu / mu_3.
  const double nu = 0.3;
  const DiseaseParams params = Params(1.01, nu);
  ClusterOptions o = Full();
  o.cap = 50;
  std::vector<int64_t> counts(4, 0);
  int64_t total = 0;
  for (uint64_t seed = 0; total < 20000 && seed < 5000000; ++seed) {
    const ClusterOutcome out = *SimulateCluster(
        params, OffspringDistribution::Poisson(1.01), 0.5, seed, o);
    if (out.size != 3 || !out.detection_imputed) continue;
    ++counts[*out.detection_index];
    ++total;
  }
  ASSERT_EQ(total, 20000);
  const double q = 1.0 - nu;
  const double mu3 = 1.0 - q * q * q;
  for (int j = 1; j <= 3; ++j) {
    const double expect = std::pow(q, j - 1) * nu / mu3;
    const Interval95 ci = WilsonInterval(counts[j], total, 4.0);
    EXPECT_LE(ci.low, expect) << "j=" << j;
    EXPECT_GE(ci.high, expect) << "j=" << j;
  }
}

TEST(SimulateClusterTest, ExtremeAdoptionRates) {
  const DiseaseParams params = Params(3, 0.1);
  const auto dist = OffspringDistribution::Poisson(3);
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    ASSERT_FALSE(SimulateCluster(params, dist, 0.0, seed, Fast())->traced);
    const ClusterOutcome all = *SimulateCluster(params, dist, 1.0, seed, Fast());
    ASSERT_EQ(all.traced, all.detection_index.has_value());
  }
  EstimateOptions o;
  o.n_trials = 20000;
  o.master_seed = 3;
  o.finite_rule = FiniteClusterRule::kLiteral;
  const MCEstimate literal = *EstimatePX0(params, dist, 1.0, o);
  const double pi1 = 1.0 - FixedPointPi0(3);
  EXPECT_GE(literal.p_hat + literal.ci_half_width(), pi1);
  o.finite_rule = FiniteClusterRule::kConditionOnDetection;
  EXPECT_EQ(EstimatePX0(params, dist, 1.0, o)->traced, o.n_trials);
  EXPECT_EQ(EstimatePX0(params, dist, 0.0, o)->traced, 0);
}

TEST(SimulateClusterTest, TracedIsMonotoneInAdoptionForFixedSeed) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double r0 = 1.2 + 4.0 * unit(rng);
    const double nu = 0.01 + 0.5 * unit(rng);
    double p1 = unit(rng), p2 = unit(rng);
    if (p1 > p2) std::swap(p1, p2);
    const uint64_t seed = rng();
    const FiniteClusterRule rule = i % 2 ? FiniteClusterRule::kLiteral
                                         : FiniteClusterRule::kConditionOnDetection;
    const auto dist = OffspringDistribution::Poisson(r0);
    const bool t1 = SimulateCluster(Params(r0, nu), dist, p1, seed, Fast(rule))->traced;
    const bool t2 = SimulateCluster(Params(r0, nu), dist, p2, seed, Fast(rule))->traced;
    ASSERT_TRUE(!t1 || t2) << "case " << i;
  }
}

TEST(SimulateClusterTest, SmallCapOnlyLosesTracedOutcomes) {
  const DiseaseParams params = Params(3, 0.02);
  const auto dist = OffspringDistribution::Poisson(3);
  ClusterOptions small = Full();
  small.cap = 10;
  int64_t truncated = 0;
  for (uint64_t seed = 0; seed < 3000; ++seed) {
    const ClusterOutcome a = *SimulateCluster(params, dist, 0.97, seed, small);
    const ClusterOutcome b = *SimulateCluster(params, dist, 0.97, seed, Fast());
    ASSERT_LE(a.size, small.cap);
    ASSERT_TRUE(!a.traced || b.traced) << "seed " << seed;
    if (a.truncated) {
      ++truncated;
      if (!a.detection_index) {
        ASSERT_FALSE(a.traced);
      }
    }
  }
  EXPECT_GT(truncated, 0);
}

TEST(EstimatePX0Test, MatchesExactSumsForBothRules) {
  for (auto [r0, nu, p] : std::vector<std::tuple<double, double, double>>{
           {3, 0.1, 0.95}, {2, 0.05, 0.9}, {1.5, 0.2, 0.7}}) {
    for (bool conditioned : {true, false}) {
      EstimateOptions o;
      o.n_trials = 100000;
      o.master_seed = 17;
      o.finite_rule = conditioned ? FiniteClusterRule::kConditionOnDetection
                                  : FiniteClusterRule::kLiteral;
      const MCEstimate est = *EstimatePX0(
          Params(r0, nu), OffspringDistribution::Poisson(r0), p, o);
      const double exact = ExactTracedProbability(r0, nu, p, conditioned);
      const double sd = std::sqrt(exact * (1 - exact) / o.n_trials);
      EXPECT_NEAR(est.p_hat, exact, 4 * sd)
          << r0 << " " << nu << " " << p << " conditioned=" << conditioned;
    }
  }
}

TEST(EstimatePX0Test, IdenticalAcrossWorkerCounts) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double r0 = 1.2 + 5.0 * unit(rng);
    const DiseaseParams params = Params(r0, 0.01 + 0.3 * unit(rng));
    EstimateOptions o;
    o.n_trials = 1 + rng() % 60;
    o.master_seed = rng();
    o.cap = 1 + rng() % 500;
    const double p = unit(rng);
    o.workers = 1;
    const MCEstimate one =
        *EstimatePX0(params, OffspringDistribution::Poisson(r0), p, o);
    o.workers = 2 + static_cast<int>(rng() % 7);
    const MCEstimate many =
        *EstimatePX0(params, OffspringDistribution::Poisson(r0), p, o);
    ASSERT_EQ(one, many) << "case " << i << " workers " << o.workers;
  }
}

TEST(EstimatePX0Test, Validation) {
  const DiseaseParams params = Params(3, 0.1);
  EstimateOptions o;
  o.n_trials = 10;
  EXPECT_FALSE(EstimatePX0(params, OffspringDistribution::Poisson(3), 1.1, o).ok());
  EXPECT_FALSE(EstimatePX0(params, OffspringDistribution::Poisson(4), 0.5, o).ok());
  o.cap = 0;
  EXPECT_FALSE(EstimatePX0(params, OffspringDistribution::Poisson(3), 0.5, o).ok());
  o.cap = 10;
  o.n_trials = 0;
  EXPECT_FALSE(EstimatePX0(params, OffspringDistribution::Poisson(3), 0.5, o).ok());
}

TEST(EstimatePStarTest, FirstGridPointWithUpperLimitBelowOne) {
  const DiseaseParams params = Params(3, 0.1);
  EstimateOptions o;
  o.n_trials = 20000;
  o.master_seed = 4;
  const std::vector<double> grid = {0.9, 0.93, 0.96, 0.99};
  const PStarEstimate est =
      *EstimatePStar(params, OffspringDistribution::Poisson(3), grid, o);
  ASSERT_EQ(est.curve.size(), grid.size());
  ASSERT_TRUE(est.p_star_hat.has_value());
  for (const CurvePoint& c : est.curve) {
    EXPECT_NEAR(c.r_e_high, 3 * (1 - c.estimate.ci_low), 1e-15);
    if (c.p < *est.p_star_hat) {
      EXPECT_GE(c.r_e_high, 1.0);
    }
  }
  EXPECT_EQ(*est.p_star_hat, 0.96);
  const std::string csv = CurveCsv(est.curve);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "p,p_hat,ci_low,ci_high,re_hat");
  EXPECT_FALSE(EstimatePStar(params, OffspringDistribution::Poisson(3),
                             std::vector<double>{0.9, 0.9}, o).ok());
  EXPECT_FALSE(EstimatePStar(params, OffspringDistribution::Poisson(3),
                             std::vector<double>{1.0}, o).ok());
}

}  // namespace
}  // namespace ctrace
