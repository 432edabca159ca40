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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ctrace/format.h"
#include "ctrace/random.h"

namespace ctrace {
namespace {

absl::Status ValidateInputs(const DiseaseParams& params,
                            const OffspringDistribution& dist, double p,
                            int64_t cap) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError("adoption rate must lie in [0, 1]");
  }
  if (cap < 1) return absl::InvalidArgumentError("cap must be >= 1");
  if (dist.kind == OffspringDistribution::Kind::kPoisson &&
      dist.mean != params.r0()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Poisson mean %g differs from r0 %g", dist.mean, params.r0()));
  }
  return absl::OkStatus();
}

class ClusterGrower {
 public:
  ClusterGrower(const DiseaseParams& params, const OffspringDistribution& dist,
                double p, uint64_t seed, const ClusterOptions& options)
      : nu_(params.nu()),
        p_(p),
        dist_(dist),
        options_(options),
        rng_(seed),
        poisson_(dist.kind == OffspringDistribution::Kind::kPoisson ? dist.mean
                                                                    : 1.0) {}

  ClusterOutcome Run() {
    AddMember(std::nullopt);
    int64_t next = 0;  // breadth-first: members are processed in id order
    while (!Decided() && next < out_.size) {
      if (out_.size >= options_.cap) {
        out_.truncated = true;
        break;
      }
      const int64_t children = DrawOffspring();
      for (int64_t c = 0; c < children && !Decided(); ++c) {
        if (out_.size >= options_.cap) {
          out_.truncated = true;
          break;
        }
        AddMember(next);
      }
      if (out_.truncated) break;
      ++next;
    }
    out_.extinct = !out_.truncated && next == out_.size;
    if (out_.extinct && !out_.detection_index.has_value() &&
        options_.finite_rule == FiniteClusterRule::kConditionOnDetection) {
      ImputeDetection();
    }
    return std::move(out_);
  }

 private:
  int64_t DrawOffspring() {
    if (dist_.kind == OffspringDistribution::Kind::kDeterministic) {
      return dist_.count;
    }
    return poisson_(rng_);
  }

  // Inverse CDF of P(Y <= j | Y <= k) = mu_j / mu_k. One extra uniform.
  void ImputeDetection() {
    const int64_t k = out_.size;
    const double u = UniformUnit(rng_);
    const double log_q = std::log1p(-nu_);
    int64_t j = 1;
    if (log_q < 0.0) {
      const double mu_k = -std::expm1(static_cast<double>(k) * log_q);
      const double target = u * mu_k;  // in [0, mu_k)
      j = static_cast<int64_t>(std::floor(std::log1p(-target) / log_q)) + 1;
    }
    j = std::clamp<int64_t>(j, 1, k);
    out_.detection_index = j;
    out_.detection_imputed = true;
    out_.traced = std::all_of(adopters_.begin(), adopters_.begin() + j,
                              [](bool a) { return a; });
  }

  void AddMember(std::optional<int64_t> parent) {
    const int64_t id = out_.size++;
    const bool adopter = UniformUnit(rng_) < p_;
    const bool severe = UniformUnit(rng_) < nu_;
    if (options_.record_nodes) out_.nodes.push_back({id, parent, adopter, severe});
    if (out_.detection_index.has_value()) return;
    adopters_.push_back(adopter);
    prefix_adopters_ = prefix_adopters_ && adopter;
    if (severe) {
      out_.detection_index = id + 1;
      out_.traced = prefix_adopters_;
    }
  }

  bool Decided() const {
    if (options_.mode != SimulationMode::kUntilDecided) return false;
    if (out_.detection_index.has_value()) return true;
    return options_.finite_rule == FiniteClusterRule::kLiteral &&
           !prefix_adopters_;
  }

  double nu_;
  double p_;
  OffspringDistribution dist_;
  ClusterOptions options_;
  Rng rng_;
  std::poisson_distribution<int64_t> poisson_;
  ClusterOutcome out_;
  std::vector<bool> adopters_;  // members before the first severe one
  bool prefix_adopters_ = true;
};

ClusterOutcome SimulateUnchecked(const DiseaseParams& params,
                                 const OffspringDistribution& dist, double p,
                                 uint64_t seed, const ClusterOptions& options) {
  return ClusterGrower(params, dist, p, seed, options).Run();
}

}  // namespace

absl::StatusOr<ClusterOutcome> SimulateCluster(
    const DiseaseParams& params, const OffspringDistribution& dist, double p,
    uint64_t seed, const ClusterOptions& options) {
  if (absl::Status s = ValidateInputs(params, dist, p, options.cap); !s.ok()) {
    return s;
  }
  return SimulateUnchecked(params, dist, p, seed, options);
}

absl::StatusOr<MCEstimate> EstimatePX0(const DiseaseParams& params,
                                       const OffspringDistribution& dist,
                                       double p,
                                       const EstimateOptions& options) {
  if (absl::Status s = ValidateInputs(params, dist, p, options.cap); !s.ok()) {
    return s;
  }
  if (options.n_trials < 1) {
    return absl::InvalidArgumentError("n_trials must be >= 1");
  }
  ClusterOptions cluster_options;
  cluster_options.cap = options.cap;
  cluster_options.mode = SimulationMode::kUntilDecided;
  cluster_options.finite_rule = options.finite_rule;

  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(
      std::clamp<int64_t>(workers, 1, std::min<int64_t>(64, options.n_trials)));

  std::vector<int64_t> traced(workers, 0);
  auto run_range = [&](int w) {
    const int64_t begin = options.n_trials * w / workers;
    const int64_t end = options.n_trials * (w + 1) / workers;
    int64_t count = 0;
    for (int64_t i = begin; i < end; ++i) {
      const uint64_t seed = DeriveSeed(options.master_seed, i);
      if (SimulateUnchecked(params, dist, p, seed, cluster_options).traced) {
        ++count;
      }
    }
    traced[w] = count;
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (std::thread& t : pool) t.join();
  }

  MCEstimate est;
  est.n_trials = options.n_trials;
  for (int64_t c : traced) est.traced += c;
  est.p_hat = static_cast<double>(est.traced) /
              static_cast<double>(options.n_trials);
  const Interval95 ci = WilsonInterval(est.traced, options.n_trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.r_e_hat = EffectiveR(params, est.p_hat);
  est.master_seed = options.master_seed;
  est.cap = options.cap;
  return est;
}

absl::StatusOr<PStarEstimate> EstimatePStar(const DiseaseParams& params,
                                            const OffspringDistribution& dist,
                                            std::span<const double> p_grid,
                                            const EstimateOptions& options) {
  if (p_grid.empty()) return absl::InvalidArgumentError("empty p grid");
  for (size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 0.0 && p_grid[i] < 1.0)) {
      return absl::InvalidArgumentError("p grid values must lie in (0, 1)");
    }
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      return absl::InvalidArgumentError("p grid must be strictly increasing");
    }
  }
  PStarEstimate out;
  for (double p : p_grid) {
    absl::StatusOr<MCEstimate> est = EstimatePX0(params, dist, p, options);
    if (!est.ok()) return est.status();
    CurvePoint point{p, *est, EffectiveR(params, est->ci_high),
                     EffectiveR(params, est->ci_low)};
    if (!out.p_star_hat.has_value() && point.r_e_high < 1.0) {
      out.p_star_hat = p;
    }
    out.curve.push_back(point);
  }
  return out;
}

std::string CurveCsv(std::span<const CurvePoint> curve) {
  std::ostringstream out;
  out << "p,p_hat,ci_low,ci_high,re_hat\n";
  for (const CurvePoint& c : curve) {
    out << FormatFixed5(c.p) << ',' << FormatFixed5(c.estimate.p_hat) << ','
        << FormatFixed5(c.estimate.ci_low) << ','
        << FormatFixed5(c.estimate.ci_high) << ','
        << FormatFixed5(c.estimate.r_e_hat) << '\n';
  }
  return out.str();
}

}  // namespace ctrace
