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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ctrace/format.h"
#include "ctrace/kernels.h"

namespace ctrace {
namespace {

constexpr double kBisectionFloor = 1e-15;
constexpr double kRootResidual = 1e-12;
constexpr double kExtInputResidual = 1e-10;

absl::Status ValidateR0(double r0) {
  if (!(r0 > 1.0) || !std::isfinite(r0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "r0 = %g: supercritical regime required (r0 > 1)", r0));
  }
  return absl::OkStatus();
}

double ExtinctionF(double r0, double x) { return std::log(x) - r0 * (x - 1.0); }

}  // namespace

absl::StatusOr<DiseaseParams> DiseaseParams::Create(double r0, double nu) {
  if (absl::Status s = ValidateR0(r0); !s.ok()) return s;
  if (!(nu > 0.0 && nu < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("nu = %g: severity probability must lie in (0, 1)", nu));
  }
  return DiseaseParams(r0, nu);
}

absl::StatusOr<ExtinctionResult> SolveExtinction(
    const OffspringDistribution& dist) {
  if (dist.kind != OffspringDistribution::Kind::kPoisson) {
    return absl::InvalidArgumentError(
        "extinction is solved analytically for Poisson offspring only");
  }
  const double r0 = dist.mean;
  if (absl::Status s = ValidateR0(r0); !s.ok()) return s;

  // f increases on (0, 1/r0), is positive at 1/r0 and tends to -inf at 0.
  double lo = kBisectionFloor;
  double hi = 1.0 / r0;
  while (ExtinctionF(r0, lo) > 0.0 && lo > std::numeric_limits<double>::min()) {
    lo *= 1e-3;
  }
  for (int iter = 0; iter < 4000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (ExtinctionF(r0, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double pi0 =
      std::abs(ExtinctionF(r0, lo)) <= std::abs(ExtinctionF(r0, hi)) ? lo : hi;
  if (ExtinctionResidual(r0, pi0) > kRootResidual) {
    return absl::InternalError(absl::StrFormat(
        "bisection residual %g exceeds %g at r0 = %g",
        ExtinctionResidual(r0, pi0), kRootResidual, r0));
  }
  return ExtinctionResult{pi0, 1.0 - pi0};
}

double ExtinctionResidual(double r0, double pi0) {
  return std::abs(ExtinctionF(r0, pi0));
}

absl::StatusOr<double> MuK(double nu, int64_t k) {
  if (k < 1) {
    return absl::InvalidArgumentError("k must be >= 1: a cluster has a root");
  }
  if (!(nu > 0.0 && nu < 1.0)) {
    return absl::InvalidArgumentError("nu must lie in (0, 1)");
  }
  return -std::expm1(static_cast<double>(k) * std::log1p(-nu));
}

double UpperBound(const DiseaseParams& params) {
  const double eps = params.epsilon();
  return kernels::UpperBoundFromOdds(eps / (1.0 - eps), params.nu());
}

absl::StatusOr<double> UpperBoundAt(double r0, double nu) {
  if (absl::Status s = ValidateR0(r0); !s.ok()) return s;
  if (!(nu > 0.0 && nu <= 1.0)) {
    return absl::InvalidArgumentError("nu must lie in (0, 1]");
  }
  const double eps = 1.0 / r0;
  return kernels::UpperBoundFromOdds(eps / (1.0 - eps), nu);
}

double LowerBoundQuadratic(const DiseaseParams& params,
                           const ExtinctionResult& ext, double p) {
  const double nu = params.nu();
  const double keep = 1.0 - params.epsilon();
  const double a = ext.pi0 * (1.0 - nu);
  const double b = ext.pi0 + ext.pi1 * nu + keep * (1.0 - nu);
  return a * p * p - b * p + keep;
}

absl::StatusOr<double> LowerBound(const DiseaseParams& params,
                                  const ExtinctionResult& ext) {
  if (ExtinctionResidual(params.r0(), ext.pi0) > kExtInputResidual ||
      std::abs(ext.pi0 + ext.pi1 - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        "extinction result was not computed for this r0");
  }
  const double nu = params.nu();
  const double eps = params.epsilon();
  const double keep = 1.0 - eps;
  const double a = ext.pi0 * (1.0 - nu);
  const double b = ext.pi0 + ext.pi1 * nu + keep * (1.0 - nu);
  const double disc = b * b - 4.0 * a * keep;
  if (disc < 0.0) {
    return absl::InternalError("negative discriminant in lower-bound quadratic");
  }
  const double at_one = LowerBoundQuadratic(params, ext, 1.0);
  if (std::abs(at_one + eps * nu) > 1e-12) {
    return absl::InternalError(absl::StrFormat(
        "quadratic(1) = %.17g, expected -eps*nu = %.17g", at_one, -eps * nu));
  }
  // (b - sqrt(disc)) / 2a rewritten to avoid cancellation.
  return 2.0 * keep / (b + std::sqrt(disc));
}

absl::StatusOr<AdoptionBounds> ComputeBounds(const DiseaseParams& params) {
  absl::StatusOr<ExtinctionResult> ext =
      SolveExtinction(OffspringDistribution::Poisson(params.r0()));
  if (!ext.ok()) return ext.status();
  absl::StatusOr<double> lower = LowerBound(params, *ext);
  if (!lower.ok()) return lower.status();
  return AdoptionBounds{*lower, UpperBound(params)};
}

double EffectiveR(const DiseaseParams& params, double prob_x0) {
  return params.r0() * (1.0 - prob_x0);
}

absl::StatusOr<TracedBracket> AnalyticTracedBracket(
    const DiseaseParams& params, const ExtinctionResult& ext, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError("adoption rate must lie in (0, 1]");
  }
  const double low = kernels::TracedLowerFromP(params.nu(), p);
  return TracedBracket{low,
                       kernels::TracedUpperFromLow(ext.pi0, ext.pi1, p, low)};
}

double LemmaRatio(double p, double nu, int64_t k) {
  const double kd = static_cast<double>(k);
  const double log_miss = std::log1p(-nu);
  const double num = -std::expm1(kd * (std::log(p) + log_miss));
  const double den = -std::expm1(kd * log_miss);
  return num / den;
}

double LogLemmaRatioExcess(double p, double nu, int64_t k) {
  // ratio - 1 = (1 - nu)^k (1 - p^k) / (1 - (1 - nu)^k)
  const double kd = static_cast<double>(k);
  const double log_miss = std::log1p(-nu);
  return kd * log_miss + std::log(-std::expm1(kd * std::log(p))) -
         std::log(-std::expm1(kd * log_miss));
}

absl::StatusOr<std::vector<SweepRow>> SweepUpperBound(
    std::span<const double> r0_list, std::span<const double> nu_grid) {
  if (r0_list.empty() || nu_grid.empty()) {
    return absl::InvalidArgumentError("sweep grids must be nonempty");
  }
  std::vector<double> r0s(r0_list.begin(), r0_list.end());
  std::vector<double> nus(nu_grid.begin(), nu_grid.end());
  std::sort(r0s.begin(), r0s.end());
  std::sort(nus.begin(), nus.end());
  for (double r0 : r0s) {
    for (double nu : nus) {
      if (absl::StatusOr<DiseaseParams> p = DiseaseParams::Create(r0, nu);
          !p.ok()) {
        return p.status();
      }
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(r0s.size() * nus.size());
  std::vector<double> values(nus.size());
  for (double r0 : r0s) {
    kernels::UpperBoundBatch(r0, nus, values);
    for (size_t i = 0; i < nus.size(); ++i) {
      rows.push_back({r0, nus[i], values[i]});
    }
  }
  return rows;
}

absl::StatusOr<std::vector<BoundsRow>> BoundsTable(
    std::span<const double> r0_list, std::span<const double> nu_list) {
  if (r0_list.empty() || nu_list.empty()) {
    return absl::InvalidArgumentError("bounds grids must be nonempty");
  }
  std::vector<BoundsRow> rows;
  for (double nu : nu_list) {
    for (double r0 : r0_list) {
      absl::StatusOr<DiseaseParams> params = DiseaseParams::Create(r0, nu);
      if (!params.ok()) return params.status();
      absl::StatusOr<AdoptionBounds> bounds = ComputeBounds(*params);
      if (!bounds.ok()) return bounds.status();
      rows.push_back({r0, nu, bounds->p_lower, bounds->p_upper});
    }
  }
  return rows;
}

absl::StatusOr<std::vector<ExtinctionRow>> ExtinctionTable(
    std::span<const double> r0_list) {
  if (r0_list.empty()) return absl::InvalidArgumentError("no r0 values");
  std::vector<ExtinctionRow> rows;
  for (double r0 : r0_list) {
    absl::StatusOr<ExtinctionResult> ext =
        SolveExtinction(OffspringDistribution::Poisson(r0));
    if (!ext.ok()) return ext.status();
    rows.push_back({r0, ext->pi0, ext->pi1, 1.0 - 1.0 / r0});
  }
  return rows;
}

std::string ExtinctionCsv(std::span<const ExtinctionRow> rows) {
  std::ostringstream out;
  out << "r0,pi0,pi1,one_minus_eps\n";
  for (const ExtinctionRow& r : rows) {
    out << FormatFixed5(r.r0) << ',' << FormatFixed5(r.pi0) << ','
        << FormatFixed5(r.pi1) << ',' << FormatFixed5(r.one_minus_eps) << '\n';
  }
  return out.str();
}

std::string BoundsCsv(std::span<const BoundsRow> rows) {
  std::ostringstream out;
  out << "r0,nu,p_lower,p_upper\n";
  for (const BoundsRow& r : rows) {
    out << FormatFixed5(r.r0) << ',' << FormatFixed5(r.nu) << ','
        << FormatFixed5(r.p_lower) << ',' << FormatFixed5(r.p_upper) << '\n';
  }
  return out.str();
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "r0,nu,p_upper\n";
  for (const SweepRow& r : rows) {
    out << FormatFixed5(r.r0) << ',' << FormatFixed5(r.nu) << ','
        << FormatFixed5(r.p_upper) << '\n';
  }
  return out.str();
}

}  // namespace ctrace
