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

#include "ctrace/stats.h"

#include <algorithm>
#include <array>
#include <cmath>

namespace ctrace {

Interval95 WilsonInterval(int64_t successes, int64_t n, double z) {
  const double nd = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nd;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nd;
  const double center = (phat + z2 / (2.0 * nd)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nd + z2 / (4.0 * nd * nd)) / denom;
  // Rounding can push an endpoint past phat at the extremes.
  return {std::clamp(std::min(center - half, phat), 0.0, 1.0),
          std::clamp(std::max(center + half, phat), 0.0, 1.0)};
}

MeanInterval MeanWithInterval(std::span<const double> values) {
  MeanInterval out{0.0, 0.0, 0.0, static_cast<int64_t>(values.size())};
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    out.low = out.high = out.mean;
    return out;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  // Two-sided 97.5% Student t quantiles for 1..30 degrees of freedom.
  static constexpr std::array<double, 30> kT = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  const size_t df = values.size() - 1;
  const double t = df <= kT.size() ? kT[df - 1] : kZ95;
  const double half = t * sd / std::sqrt(static_cast<double>(values.size()));
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

}  // namespace ctrace
