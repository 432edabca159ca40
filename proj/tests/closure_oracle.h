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


// Brute-force cluster closure over per-minute exposure bitmaps, plus a random
// contact-graph generator on the minute grid. Shares no code with the graph
// store or the frontier search it checks.

#ifndef CTRACE_TESTS_CLOSURE_ORACLE_H_
#define CTRACE_TESTS_CLOSURE_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace ctrace::testing {

// One recorded contact; times are whole minutes. cls: 0 immediate, 1 near,
// 2 far.
struct MinuteContact {
  uint64_t a;
  uint64_t b;
  int64_t start_min;
  int64_t dur_min;
  int cls;
};

struct RandomGraph {
  int devices = 0;
  std::vector<MinuteContact> contacts;
  std::set<uint64_t> positives;
  uint64_t seed_device = 0;
  int64_t now_min = 0;
};

inline RandomGraph MakeRandomGraph(std::mt19937_64& rng, int max_devices = 200) {
  RandomGraph g;
  g.devices = 2 + static_cast<int>(rng() % (max_devices - 1));
  g.now_min = 30 * 24 * 60;
  const int events = static_cast<int>(rng() % (4 * g.devices + 1));
  std::uniform_int_distribution<int64_t> start(0, g.now_min - 1);
  std::uniform_int_distribution<int64_t> dur(1, 90);
  for (int i = 0; i < events; ++i) {
    MinuteContact c;
    c.a = rng() % g.devices;
    do {
      c.b = rng() % g.devices;
    } while (c.b == c.a);
    c.start_min = start(rng);
    c.dur_min = dur(rng);
    c.cls = static_cast<int>(rng() % 3);
    g.contacts.push_back(c);
    // Occasional exact duplicates and overlapping repeats.
    if (rng() % 10 == 0) g.contacts.push_back(c);
    if (rng() % 10 == 0) {
      MinuteContact d = c;
      d.start_min += static_cast<int64_t>(rng() % 30);
      std::swap(d.a, d.b);
      g.contacts.push_back(d);
    }
  }
  const double positive_rate = 0.2 + 0.6 * (rng() % 1000) / 1000.0;
  for (int d = 0; d < g.devices; ++d) {
    if ((rng() % 1000) / 1000.0 < positive_rate) g.positives.insert(d);
  }
  g.seed_device = rng() % g.devices;
  g.positives.insert(g.seed_device);
  return g;
}

struct ClosureResult {
  std::set<uint64_t> confirmed;
  std::set<uint64_t> negatives;
  std::map<uint64_t, double> notified;  // device -> highest score
  int rounds = 0;
};

// Exposure minutes are counted cell by cell: minute m is covered when some
// contact of the class spans [m, m + 1) and the cell lies in the window.
inline ClosureResult BruteForceClosure(const RandomGraph& g,
                                       int64_t lookback_min,
                                       double weight_immediate = 4,
                                       double weight_near = 1,
                                       double caution = 5) {
  const int64_t w_begin = g.now_min - lookback_min;
  const int64_t w_end = g.now_min;
  std::map<std::pair<uint64_t, uint64_t>, std::vector<std::vector<bool>>> cells;
  for (const MinuteContact& c : g.contacts) {
    const auto key = std::minmax(c.a, c.b);
    auto& bits = cells[{key.first, key.second}];
    if (bits.empty()) bits.assign(2, std::vector<bool>(w_end - w_begin, false));
    if (c.cls == 2) continue;
    for (int64_t m = c.start_min; m < c.start_min + c.dur_min; ++m) {
      if (m >= w_begin && m < w_end) bits[c.cls][m - w_begin] = true;
    }
  }
  std::map<uint64_t, std::vector<std::pair<uint64_t, double>>> adj;
  for (const auto& [key, bits] : cells) {
    const double imm = std::count(bits[0].begin(), bits[0].end(), true);
    const double near = std::count(bits[1].begin(), bits[1].end(), true);
    const double score = weight_immediate * imm + weight_near * near;
    if (score < caution) continue;
    adj[key.first].push_back({key.second, score});
    adj[key.second].push_back({key.first, score});
  }
  ClosureResult r;
  std::vector<uint64_t> level = {g.seed_device};
  r.confirmed.insert(g.seed_device);
  while (!level.empty()) {
    ++r.rounds;
    std::vector<uint64_t> next;
    for (uint64_t u : level) {
      for (const auto& [v, score] : adj[u]) {
        double& best = r.notified[v];
        best = std::max(best, score);
        if (r.confirmed.contains(v)) continue;
        if (g.positives.contains(v)) {
          r.confirmed.insert(v);
          next.push_back(v);
        } else {
          r.negatives.insert(v);
        }
      }
    }
    level = std::move(next);
  }
  for (uint64_t c : r.confirmed) r.notified.erase(c);
  return r;
}

}  // namespace ctrace::testing

#endif  // CTRACE_TESTS_CLOSURE_ORACLE_H_
