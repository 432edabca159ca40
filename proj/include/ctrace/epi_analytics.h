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

#ifndef CTRACE_EPI_ANALYTICS_H_
#define CTRACE_EPI_ANALYTICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

// Closed-form and root-finding analytics for the branching-process model of
// tracing by contact recorders: extinction probabilities, the severity
// probability of a size-k cluster, and the lower/upper bounds on the minimum
// adoption rate that drives the effective reproduction ratio below one.
namespace ctrace {

// Basic reproduction ratio r0 > 1 and severity probability 0 < nu < 1.
// epsilon is always recomputed as 1 / r0.
class DiseaseParams {
 public:
  static absl::StatusOr<DiseaseParams> Create(double r0, double nu);

  double r0() const { return r0_; }
  double nu() const { return nu_; }
  double epsilon() const { return 1.0 / r0_; }

 private:
  DiseaseParams(double r0, double nu) : r0_(r0), nu_(nu) {}

  double r0_;
  double nu_;
};

// Number of direct infections caused by one patient. The deterministic kind
// exists for Monte Carlo oracle tests only.
struct OffspringDistribution {
  enum class Kind { kPoisson, kDeterministic };

  static OffspringDistribution Poisson(double mean) {
    return {Kind::kPoisson, mean, 0};
  }
  static OffspringDistribution Deterministic(uint32_t count) {
    return {Kind::kDeterministic, static_cast<double>(count), count};
  }

  Kind kind;
  double mean;
  uint32_t count;
};

struct ExtinctionResult {
  double pi0;  // the cluster eventually stops growing
  double pi1;  // the cluster grows without bound
};

// Lower bound p_lower <= p* <= p_upper on the minimum adoption rate.
struct AdoptionBounds {
  double p_lower;
  double p_upper;
};

// Bracket on P(X=0), the probability that a child's cluster is fully traced.
struct TracedBracket {
  double low;
  double high;
};

// Solves log(x) = r0 (x - 1) for the root in (0, 1/r0) by bisection on
// (1e-15, 1/r0). Only the Poisson kind with mean > 1 is accepted.
absl::StatusOr<ExtinctionResult> SolveExtinction(
    const OffspringDistribution& dist);

// |log(pi0) - r0 (pi0 - 1)|.
double ExtinctionResidual(double r0, double pi0);

// 1 - (1 - nu)^k: probability that a size-k cluster has a severe member.
absl::StatusOr<double> MuK(double nu, int64_t k);

// p_upper = 1 / (1 + nu eps / (1 - eps)). Independent of the offspring
// distribution.
double UpperBound(const DiseaseParams& params);

// Same closed form with the severity check relaxed to 0 < nu <= 1.
absl::StatusOr<double> UpperBoundAt(double r0, double nu);

// The quadratic whose sub-unit root is p_lower:
//   pi0 (1 - nu) p^2 - (pi0 + pi1 nu + (1 - eps)(1 - nu)) p + (1 - eps).
double LowerBoundQuadratic(const DiseaseParams& params,
                           const ExtinctionResult& ext, double p);

// Smaller root of LowerBoundQuadratic. Fails if `ext` does not solve the
// extinction equation for params.r0().
absl::StatusOr<double> LowerBound(const DiseaseParams& params,
                                  const ExtinctionResult& ext);

absl::StatusOr<AdoptionBounds> ComputeBounds(const DiseaseParams& params);

// r0 (1 - prob_x0).
double EffectiveR(const DiseaseParams& params, double prob_x0);

// low = nu p / (1 - p (1 - nu)), high = p pi0 + pi1 low. Requires 0 < p <= 1.
absl::StatusOr<TracedBracket> AnalyticTracedBracket(
    const DiseaseParams& params, const ExtinctionResult& ext, double p);

// (1 - (p (1 - nu))^k) / (1 - (1 - nu)^k); decreasing in k, equal to
// (1 - p (1 - nu)) / nu at k = 1.
double LemmaRatio(double p, double nu, int64_t k);

// log(LemmaRatio(p, nu, k) - 1), computed without cancellation so that the
// strict decrease in k stays visible long after the ratio rounds to 1.
double LogLemmaRatioExcess(double p, double nu, int64_t k);

struct SweepRow {
  double r0;
  double nu;
  double p_upper;
};

// p_upper over the grid, rows ordered by (r0, nu) ascending.
absl::StatusOr<std::vector<SweepRow>> SweepUpperBound(
    std::span<const double> r0_list, std::span<const double> nu_grid);

struct BoundsRow {
  double r0;
  double nu;
  double p_lower;
  double p_upper;
};

// One row per (nu, r0) pair, nu outer and r0 inner, in input order.
absl::StatusOr<std::vector<BoundsRow>> BoundsTable(
    std::span<const double> r0_list, std::span<const double> nu_list);

struct ExtinctionRow {
  double r0;
  double pi0;
  double pi1;
  double one_minus_eps;
};

absl::StatusOr<std::vector<ExtinctionRow>> ExtinctionTable(
    std::span<const double> r0_list);

// CSV renderings, 5 decimals per value.
std::string ExtinctionCsv(std::span<const ExtinctionRow> rows);
std::string BoundsCsv(std::span<const BoundsRow> rows);
std::string SweepCsv(std::span<const SweepRow> rows);

}  // namespace ctrace

#endif  // CTRACE_EPI_ANALYTICS_H_
