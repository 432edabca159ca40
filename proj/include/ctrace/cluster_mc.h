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

#ifndef CTRACE_CLUSTER_MC_H_
#define CTRACE_CLUSTER_MC_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ctrace/epi_analytics.h"
#include "ctrace/stats.h"

// Monte Carlo realization of the traceability event: a Galton-Watson cluster
// grown in breadth-first infection order, where each member carries a contact
// recorder with probability p and shows severe symptoms with probability nu.
// The cluster is traced (X = 0) iff its first severe member appears at
// position Y and all of the first Y members carry recorders.
//
// A cluster that dies out before any member turns severe has no realized Y.
// The closed-form bounds treat such clusters as detected, with Y following
// P(Y = j | size k) = (1 - nu)^(j-1) nu / mu_k, and that is the default here.
namespace ctrace {

inline constexpr int64_t kDefaultClusterCap = 10000;

struct InfectionNode {
  int64_t id;
  std::optional<int64_t> parent;  // empty for the root
  bool adopter;
  bool severe;
};

enum class SimulationMode {
  // Grow until extinction or the cap.
  kFullCluster,
  // Stop as soon as the traced flag is decided: at the first severe member,
  // or (kLiteral only) at the first non-adopter seen before it. Same draws as
  // kFullCluster up to the stopping point, so `traced` and `detection_index`
  // (when present) agree; `size` is then the number of members realized.
  kUntilDecided,
};

enum class FiniteClusterRule {
  // Extinct clusters with no severe member draw Y from the truncated
  // geometric law on 1..size. Matches the analytic bracket.
  kConditionOnDetection,
  // Extinct clusters with no severe member are untraced.
  kLiteral,
};

struct ClusterOptions {
  int64_t cap = kDefaultClusterCap;
  SimulationMode mode = SimulationMode::kFullCluster;
  FiniteClusterRule finite_rule = FiniteClusterRule::kConditionOnDetection;
  bool record_nodes = false;
};

struct ClusterOutcome {
  int64_t size = 0;
  bool truncated = false;  // growth stopped by the cap
  bool extinct = false;    // every realized member was processed
  std::optional<int64_t> detection_index;
  // Y was drawn from the conditional law, not from realized severity.
  bool detection_imputed = false;
  bool traced = false;
  std::vector<InfectionNode> nodes;  // filled when record_nodes is set

  int x_value() const { return traced ? 0 : 1; }
};

// Identical seed gives an identical outcome. Adoption is drawn as u < p from
// one uniform per member, so outcomes are coupled across p for a fixed seed.
absl::StatusOr<ClusterOutcome> SimulateCluster(
    const DiseaseParams& params, const OffspringDistribution& dist, double p,
    uint64_t seed, const ClusterOptions& options = {});

struct EstimateOptions {
  int64_t cap = kDefaultClusterCap;
  int64_t n_trials = 100000;
  uint64_t master_seed = 0;
  FiniteClusterRule finite_rule = FiniteClusterRule::kConditionOnDetection;
  // 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  int workers = 1;
};

struct MCEstimate {
  int64_t n_trials = 0;
  int64_t traced = 0;
  double p_hat = 0.0;  // estimated P(X = 0)
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_e_hat = 0.0;  // r0 (1 - p_hat)
  uint64_t master_seed = 0;
  int64_t cap = 0;

  double ci_half_width() const { return 0.5 * (ci_high - ci_low); }
  bool operator==(const MCEstimate&) const = default;
};

// Trial i uses seed DeriveSeed(master_seed, i).
absl::StatusOr<MCEstimate> EstimatePX0(const DiseaseParams& params,
                                       const OffspringDistribution& dist,
                                       double p,
                                       const EstimateOptions& options);

struct CurvePoint {
  double p;
  MCEstimate estimate;
  double r_e_low;   // r0 (1 - ci_high)
  double r_e_high;  // r0 (1 - ci_low)
};

struct PStarEstimate {
  std::optional<double> p_star_hat;
  std::vector<CurvePoint> curve;
};

// Smallest grid p whose upper R_e confidence limit is below 1. The grid must
// be strictly increasing inside (0, 1). All grid points share trial seeds.
absl::StatusOr<PStarEstimate> EstimatePStar(const DiseaseParams& params,
                                            const OffspringDistribution& dist,
                                            std::span<const double> p_grid,
                                            const EstimateOptions& options);

// `p,p_hat,ci_low,ci_high,re_hat`, 5 decimals.
std::string CurveCsv(std::span<const CurvePoint> curve);

}  // namespace ctrace

#endif  // CTRACE_CLUSTER_MC_H_
