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

#ifndef CTRACE_STATS_H_
#define CTRACE_STATS_H_

#include <cstdint>
#include <span>

namespace ctrace {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval95 {
  double low;
  double high;
};

// Wilson score interval for a binomial proportion. Requires n >= 1.
Interval95 WilsonInterval(int64_t successes, int64_t n, double z = kZ95);

// Mean with a normal-approximation 95% interval (t quantile for small n).
struct MeanInterval {
  double mean;
  double low;
  double high;
  int64_t n;
};
MeanInterval MeanWithInterval(std::span<const double> values);

}  // namespace ctrace

#endif  // CTRACE_STATS_H_
