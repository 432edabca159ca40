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

#include "ctrace/abm.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "absl/container/btree_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ctrace/cluster_discovery.h"
#include "ctrace/contact_graph.h"
#include "ctrace/format.h"
#include "ctrace/random.h"
#include "ctrace/stats.h"

namespace ctrace::abm {

double ScenarioConfig::TransmissionProb() const {
  if (transmission_prob.has_value()) return *transmission_prob;
  return r0 / (contacts_per_day * static_cast<double>(infectious_days));
}

absl::Status ValidateConfig(const ScenarioConfig& c) {
  if (c.population < 2) return absl::InvalidArgumentError("population < 2");
  if (!(c.adoption >= 0.0 && c.adoption <= 1.0)) {
    return absl::InvalidArgumentError("adoption must lie in [0, 1]");
  }
  if (!(c.r0 > 0.0)) return absl::InvalidArgumentError("r0 must be > 0");
  if (!(c.nu > 0.0 && c.nu < 1.0)) {
    return absl::InvalidArgumentError("nu must lie in (0, 1)");
  }
  if (!(c.contacts_per_day > 0.0)) {
    return absl::InvalidArgumentError("contacts_per_day must be > 0");
  }
  if (c.infectious_days < 1) {
    return absl::InvalidArgumentError("infectious_days must be >= 1");
  }
  const double beta = c.TransmissionProb();
  if (!(beta > 0.0 && beta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("transmission probability %g outside (0, 1]", beta));
  }
  const double implied = c.contacts_per_day * beta * c.infectious_days;
  if (std::abs(implied - c.r0) > 1e-9 * c.r0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "calibration identity broken: contacts * prob * days = %g, r0 = %g",
        implied, c.r0));
  }
  if (c.onset_min_days < 0 || c.onset_max_days < c.onset_min_days) {
    return absl::InvalidArgumentError("bad onset delay range");
  }
  if (c.min_contact_seconds <= 0 || c.max_contact_seconds < c.min_contact_seconds ||
      c.max_contact_seconds >= kSecondsPerDay) {
    return absl::InvalidArgumentError("bad contact duration range");
  }
  if (!(c.immediate_fraction >= 0.0 && c.immediate_fraction <= 1.0)) {
    return absl::InvalidArgumentError("immediate_fraction must lie in [0, 1]");
  }
  if (c.quarantine_delay_days < 0) {
    return absl::InvalidArgumentError("quarantine delay must be >= 0");
  }
  if (c.horizon_days < 1) return absl::InvalidArgumentError("horizon < 1");
  if (c.initial_infections < 1 || c.initial_infections > c.population) {
    return absl::InvalidArgumentError("bad number of initial infections");
  }
  if (c.replicates < 1) return absl::InvalidArgumentError("replicates < 1");
  if (c.lookback <= 0 || c.retention < c.lookback) {
    return absl::InvalidArgumentError("retention must cover the lookback");
  }
  return absl::OkStatus();
}

namespace {

constexpr int kNoRecord = -1;

struct Agent {
  AgentState state = AgentState::kSusceptible;
  bool adopter = false;
  bool confirmed = false;
  int record = kNoRecord;
};

class Simulator {
 public:
  Simulator(const ScenarioConfig& config, uint64_t seed)
      : cfg_(config),
        beta_(config.TransmissionProb()),
        rng_(seed),
        graph_(GraphOptions{config.retention, {}}),
        agents_(config.population) {
    trace_.seed = seed;
    trace_.horizon_days = config.horizon_days;
    trace_.infectious_days = config.infectious_days;
    for (Agent& a : agents_) a.adopter = UniformUnit(rng_) < cfg_.adoption;
  }

  EpidemicTrace Run() {
    SeedInfections();
    for (int day = 0; day < cfg_.horizon_days; ++day) {
      Recover(day);
      ApplyPendingQuarantines(day);
      Surface(day);
      DayCounts counts = Census(day);
      MixAndTransmit(day);
      if (cfg_.tracing) (void)graph_.Purge((day + 1) * kSecondsPerDay);
      counts.new_infections = new_today_;
      new_today_ = 0;
      const DayCounts end = Census(day);
      counts.active = end.active;
      counts.quarantined = end.quarantined;
      counts.susceptible = end.susceptible;
      counts.recovered = end.recovered;
      if (counts.active + counts.quarantined + counts.susceptible +
              counts.recovered !=
          cfg_.population) {
        trace_.conservation_held = false;
      }
      trace_.days.push_back(counts);
    }
    Finish();
    return std::move(trace_);
  }

 private:
  bool Infectious(const Agent& a, int day) const {
    if (a.state != AgentState::kInfected) return false;
    const int t = trace_.infections[a.record].day;
    return day >= t + 1 && day <= t + cfg_.infectious_days;
  }

  void Infect(uint64_t id, std::optional<uint64_t> infector, int day,
              std::optional<TimeInterval> via, bool immediate) {
    Agent& a = agents_[id];
    a.state = AgentState::kInfected;
    a.record = static_cast<int>(trace_.infections.size());
    InfectionRecord rec;
    rec.agent = id;
    rec.infector = infector;
    rec.day = day;
    rec.adopter = a.adopter;
    rec.severe = UniformUnit(rng_) < cfg_.nu;
    rec.onset_delay = static_cast<int>(
        UniformInt(rng_, cfg_.onset_min_days, cfg_.onset_max_days));
    rec.transmission = via;
    rec.transmission_immediate = immediate;
    if (infector.has_value()) {
      InfectionRecord& parent = trace_.infections[agents_[*infector].record];
      ++parent.offspring;
      rec.root = parent.root;
      rec.generation = parent.generation + 1;
      children_[agents_[*infector].record].push_back(a.record);
    } else {
      rec.root = id;
    }
    trees_[rec.root].push_back(a.record);
    children_.emplace_back();
    if (rec.severe && day + rec.onset_delay < cfg_.horizon_days) {
      surfacing_[day + rec.onset_delay].push_back(id);
    }
    trace_.infections.push_back(rec);
    ++new_today_;
  }

  void SeedInfections() {
    absl::btree_set<uint64_t> chosen;
    while (static_cast<int64_t>(chosen.size()) < cfg_.initial_infections) {
      chosen.insert(static_cast<uint64_t>(UniformInt(rng_, 0, cfg_.population - 1)));
    }
    for (uint64_t id : chosen) Infect(id, std::nullopt, 0, std::nullopt, false);
  }

  void Recover(int day) {
    for (Agent& a : agents_) {
      if (a.state == AgentState::kInfected &&
          day > trace_.infections[a.record].day + cfg_.infectious_days) {
        a.state = AgentState::kRecovered;
      }
    }
  }

  void QuarantineNow(uint64_t id, int day) {
    Agent& a = agents_[id];
    if (a.state != AgentState::kInfected) return;
    a.state = AgentState::kQuarantined;
    trace_.infections[a.record].quarantined_day = day;
    ++quarantined_today_;
  }

  void Quarantine(uint64_t id, int day) {
    if (cfg_.quarantine_delay_days == 0) {
      QuarantineNow(id, day);
    } else {
      pending_quarantine_[day + cfg_.quarantine_delay_days].push_back(id);
    }
  }

  void ApplyPendingQuarantines(int day) {
    auto it = pending_quarantine_.find(day);
    if (it == pending_quarantine_.end()) return;
    for (uint64_t id : it->second) QuarantineNow(id, day);
    pending_quarantine_.erase(it);
  }

  void Confirm(uint64_t id, int day) {
    Agent& a = agents_[id];
    a.confirmed = true;
    if (a.record != kNoRecord) trace_.infections[a.record].confirmed_day = day;
  }

  void Surface(int day) {
    auto it = surfacing_.find(day);
    if (it == surfacing_.end()) return;
    std::vector<uint64_t> cases = it->second;
    std::sort(cases.begin(), cases.end());
    for (uint64_t id : cases) {
      if (agents_[id].confirmed) continue;
      Confirm(id, day);
      quarantined_today_ = 0;
      if (cfg_.quarantine_surfaced) Quarantine(id, day);
      if (cfg_.tracing) Discover(id, day);
    }
    surfacing_.erase(it);
  }

  bool EverInfected(DeviceId d) const {
    return d.value < agents_.size() && agents_[d.value].record != kNoRecord;
  }

  void Discover(uint64_t trigger, int day) {
    const int64_t now = static_cast<int64_t>(day) * kSecondsPerDay;
    DiscoveryOptions opts{cfg_.lookback, cfg_.risk};
    TestOracle oracle = [this](DeviceId d, int64_t) -> absl::StatusOr<bool> {
      return EverInfected(d);
    };
    absl::StatusOr<ClusterReport> report = DiscoverCluster(
        CaseRecord::Confirmed(DeviceId{trigger}, now), graph_, oracle, now, opts);
    if (!report.ok()) return;

    ClusterRecord rec;
    rec.day = day;
    rec.trigger = trigger;
    rec.rounds = report->rounds;
    rec.size_at_discovery = static_cast<int64_t>(report->confirmed.size());
    for (DeviceId d : report->confirmed) {
      if (d.value != trigger && !agents_[d.value].confirmed) Confirm(d.value, day);
      Quarantine(d.value, day);
    }
    rec.newly_quarantined = quarantined_today_;

    const InfectionRecord& trig = trace_.infections[agents_[trigger].record];
    rec.root = trig.root;
    const std::vector<int>& tree = trees_[trig.root];
    rec.origin_day = trace_.infections[tree.front()].day;
    rec.delay_days = day - rec.origin_day;
    rec.tree_size = static_cast<int64_t>(tree.size());
    for (size_t k = 0; k < tree.size(); ++k) {
      const InfectionRecord& member = trace_.infections[tree[k]];
      if (agents_[member.agent].confirmed) ++rec.tree_confirmed;
      if (!rec.first_severe_index && member.severe) {
        rec.first_severe_index = static_cast<int64_t>(k) + 1;
      }
    }
    rec.fraction_traced = static_cast<double>(rec.tree_confirmed) /
                          static_cast<double>(rec.tree_size);
    if (cfg_.audit) Audit(*report, trigger, now, rec);
    trace_.clusters.push_back(rec);
  }

  // Brute-force fixpoint over the same contact relation, plus a check that
  // every tree member linked to the trigger by recorded, qualifying
  // transmission contacts inside the lookback was confirmed.
  void Audit(const ClusterReport& report, uint64_t trigger, int64_t now,
             ClusterRecord& rec) const {
    absl::btree_set<DeviceId> closure = {DeviceId{trigger}};
    for (bool grew = true; grew;) {
      grew = false;
      for (DeviceId c : std::vector<DeviceId>(closure.begin(), closure.end())) {
        for (const Exposure& e :
             graph_.ContactsOf(c, now, cfg_.lookback, cfg_.risk).contacts) {
          if (e.action != RiskAction::kNone && EverInfected(e.other) &&
              closure.insert(e.other).second) {
            grew = true;
          }
        }
      }
    }
    const absl::btree_set<DeviceId> found(report.confirmed.begin(),
                                          report.confirmed.end());
    for (DeviceId d : closure) rec.closure_mismatches += !found.contains(d);
    for (DeviceId d : found) rec.closure_mismatches += !closure.contains(d);

    const int64_t window_begin = now - cfg_.lookback;
    auto edge_qualifies = [&](const InfectionRecord& child) {
      const InfectionRecord& parent =
          trace_.infections[agents_[*child.infector].record];
      if (!child.adopter || !parent.adopter || !child.transmission) return false;
      const TimeInterval iv = *child.transmission;
      if (iv.begin > now || iv.end < window_begin) return false;
      const int64_t secs = std::min(iv.end, now) - std::max(iv.begin, window_begin);
      const double score = child.transmission_immediate
                               ? RiskScore(secs, 0, cfg_.risk)
                               : RiskScore(0, secs, cfg_.risk);
      return ClassifyRisk(score, cfg_.risk) != RiskAction::kNone;
    };
    std::vector<int> stack = {agents_[trigger].record};
    absl::btree_set<int> seen = {agents_[trigger].record};
    while (!stack.empty()) {
      const int r = stack.back();
      stack.pop_back();
      const InfectionRecord& node = trace_.infections[r];
      if (!found.contains(DeviceId{node.agent})) ++rec.missed_chain_members;
      std::vector<int> next;
      if (node.infector && edge_qualifies(node)) {
        next.push_back(agents_[*node.infector].record);
      }
      for (int c : children_[r]) {
        if (edge_qualifies(trace_.infections[c])) next.push_back(c);
      }
      for (int n : next) {
        if (seen.insert(n).second) stack.push_back(n);
      }
    }
  }

  DayCounts Census(int day) const {
    DayCounts c;
    c.day = day;
    for (const Agent& a : agents_) {
      switch (a.state) {
        case AgentState::kSusceptible:
          ++c.susceptible;
          break;
        case AgentState::kInfected:
          ++c.active;
          break;
        case AgentState::kQuarantined:
          ++c.quarantined;
          break;
        case AgentState::kRecovered:
          ++c.recovered;
          break;
      }
    }
    const int64_t free = c.susceptible + c.active + c.recovered;
    c.susceptible_share =
        free > 0 ? static_cast<double>(c.susceptible) / static_cast<double>(free)
                 : 0.0;
    return c;
  }

  void MixAndTransmit(int day) {
    std::vector<uint64_t> free;
    for (uint64_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].state != AgentState::kQuarantined) free.push_back(i);
    }
    if (free.size() < 2) return;
    const double expected =
        static_cast<double>(free.size()) * cfg_.contacts_per_day / 2.0;
    int64_t pairs = static_cast<int64_t>(std::floor(expected));
    if (UniformUnit(rng_) < expected - std::floor(expected)) ++pairs;
    const int64_t last = static_cast<int64_t>(free.size()) - 1;
    const int64_t day_start = static_cast<int64_t>(day) * kSecondsPerDay;
    for (int64_t k = 0; k < pairs; ++k) {
      const uint64_t i = free[UniformInt(rng_, 0, last)];
      uint64_t j = i;
      while (j == i) j = free[UniformInt(rng_, 0, last)];
      const int64_t dur =
          UniformInt(rng_, cfg_.min_contact_seconds, cfg_.max_contact_seconds);
      const int64_t start =
          day_start + UniformInt(rng_, 0, kSecondsPerDay - dur - 1);
      const bool immediate = UniformUnit(rng_) < cfg_.immediate_fraction;
      const double u = UniformUnit(rng_);
      if (cfg_.tracing && agents_[i].adopter && agents_[j].adopter) {
        absl::StatusOr<ContactEvent> ev = ContactEvent::Create(
            DeviceId{i}, DeviceId{j}, start, dur,
            immediate ? Proximity::kImmediate : Proximity::kNear);
        if (ev.ok()) (void)graph_.Ingest(*ev);
      }
      uint64_t src = i, dst = j;
      if (!Infectious(agents_[src], day)) std::swap(src, dst);
      if (Infectious(agents_[src], day) &&
          agents_[dst].state == AgentState::kSusceptible && u < beta_) {
        Infect(dst, src, day, TimeInterval{start, start + dur}, immediate);
      }
    }
  }

  void Finish() {
    for (const InfectionRecord& r : trace_.infections) {
      if (!r.infector) continue;
      const InfectionRecord& src = trace_.infections[agents_[*r.infector].record];
      if (src.quarantined_day && *src.quarantined_day <= r.day) {
        ++trace_.post_quarantine_transmissions;
      }
    }
    absl::btree_set<uint64_t> discovered_roots;
    for (const InfectionRecord& r : trace_.infections) {
      if (agents_[r.agent].confirmed) discovered_roots.insert(r.root);
    }
    for (const InfectionRecord& r : trace_.infections) {
      if (agents_[r.agent].state != AgentState::kInfected) continue;
      if (agents_[r.agent].confirmed) {
        ++trace_.confirmed_free_at_horizon;
      } else if (discovered_roots.contains(r.root)) {
        ++trace_.undiscovered_active_in_discovered_trees;
      }
    }
  }

  const ScenarioConfig& cfg_;
  const double beta_;
  Rng rng_;
  ContactGraph graph_;
  std::vector<Agent> agents_;
  EpidemicTrace trace_;
  std::vector<std::vector<int>> children_;
  std::map<uint64_t, std::vector<int>> trees_;
  std::map<int, std::vector<uint64_t>> surfacing_;
  std::map<int, std::vector<uint64_t>> pending_quarantine_;
  int64_t new_today_ = 0;
  int64_t quarantined_today_ = 0;
};

}  // namespace

absl::StatusOr<EpidemicTrace> RunScenario(const ScenarioConfig& config) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  return Simulator(config, config.master_seed).Run();
}

absl::StatusOr<std::vector<EpidemicTrace>> RunReplicates(
    const ScenarioConfig& config, int workers) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  std::vector<EpidemicTrace> traces(config.replicates);
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.replicates);
  auto run = [&](int w) {
    for (int i = w; i < config.replicates; i += workers) {
      traces[i] = Simulator(config, DeriveSeed(config.master_seed, i)).Run();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (std::thread& t : pool) t.join();
  }
  return traces;
}

ReproductionEstimate MeasureRe(std::span<const EpidemicTrace> traces) {
  ReproductionEstimate out;
  out.traces = static_cast<int64_t>(traces.size());
  std::vector<double> per_trace;
  double pooled_offspring = 0.0;
  double pooled_weight = 0.0;
  for (const EpidemicTrace& t : traces) {
    double offspring = 0.0;
    double weight = 0.0;
    for (const InfectionRecord& r : t.infections) {
      // Only infectors whose whole window fits in the run; ones still
      // infectious at the horizon would bias the estimate low.
      if (r.day + t.infectious_days >= t.horizon_days) continue;
      const int first = r.day + 1;
      const int last = std::min(r.day + t.infectious_days, t.horizon_days - 1);
      if (first > last) continue;
      double share = 0.0;
      for (int d = first; d <= last; ++d) share += t.days[d].susceptible_share;
      share /= static_cast<double>(last - first + 1);
      offspring += static_cast<double>(r.offspring);
      weight += share;
      ++out.completed_infectors;
      out.max_generation = std::max(out.max_generation, r.generation);
    }
    pooled_offspring += offspring;
    pooled_weight += weight;
    if (weight > 0.0) per_trace.push_back(offspring / weight);
  }
  if (per_trace.size() >= 2) {
    const MeanInterval mi = MeanWithInterval(per_trace);
    out.estimate = mi.mean;
    out.ci_low = std::max(0.0, mi.low);
    out.ci_high = mi.high;
  } else if (pooled_weight > 0.0) {
    out.estimate = pooled_offspring / pooled_weight;
    const double half = kZ95 * std::sqrt(pooled_offspring) / pooled_weight;
    out.ci_low = std::max(0.0, out.estimate - half);
    out.ci_high = out.estimate + half;
  }
  out.low_confidence = out.max_generation < 2 || out.completed_infectors < 30;
  return out;
}

std::string TraceCsv(const EpidemicTrace& trace) {
  std::ostringstream out;
  out << "day,new_inf,active,quarantined\n";
  for (const DayCounts& d : trace.days) {
    out << d.day << ',' << d.new_infections << ',' << d.active << ','
        << d.quarantined << '\n';
  }
  return out.str();
}

nlohmann::json ClusterRecordsJson(const EpidemicTrace& trace) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ClusterRecord& c : trace.clusters) {
    nlohmann::json j = {{"day", c.day},
                        {"trigger", c.trigger},
                        {"size_at_discovery", c.size_at_discovery},
                        {"newly_quarantined", c.newly_quarantined},
                        {"rounds", c.rounds},
                        {"root", c.root},
                        {"origin_day", c.origin_day},
                        {"delay_days", c.delay_days},
                        {"tree_size", c.tree_size},
                        {"tree_confirmed", c.tree_confirmed},
                        {"fraction_traced", FormatFixed5(c.fraction_traced)}};
    if (c.first_severe_index) j["first_severe_index"] = *c.first_severe_index;
    arr.push_back(j);
  }
  return {{"seed", trace.seed},
          {"clusters", arr},
          {"conservation_held", trace.conservation_held},
          {"post_quarantine_transmissions", trace.post_quarantine_transmissions},
          {"undiscovered_active_in_discovered_trees",
           trace.undiscovered_active_in_discovered_trees},
          {"confirmed_free_at_horizon", trace.confirmed_free_at_horizon}};
}

nlohmann::json ConfigToJson(const ScenarioConfig& c) {
  return {{"population", c.population},
          {"adoption", c.adoption},
          {"r0", c.r0},
          {"nu", c.nu},
          {"contacts_per_day", c.contacts_per_day},
          {"transmission_prob", c.TransmissionProb()},
          {"min_contact_seconds", c.min_contact_seconds},
          {"max_contact_seconds", c.max_contact_seconds},
          {"immediate_fraction", c.immediate_fraction},
          {"infectious_days", c.infectious_days},
          {"onset_min_days", c.onset_min_days},
          {"onset_max_days", c.onset_max_days},
          {"tracing", c.tracing},
          {"quarantine_surfaced", c.quarantine_surfaced},
          {"quarantine_delay_days", c.quarantine_delay_days},
          {"lookback", c.lookback},
          {"retention", c.retention},
          {"risk",
           {{"weight_immediate", c.risk.weight_immediate},
            {"weight_near", c.risk.weight_near},
            {"quarantine_threshold", c.risk.quarantine_threshold},
            {"caution_threshold", c.risk.caution_threshold},
            {"infectiousness", c.risk.infectiousness}}},
          {"audit", c.audit},
          {"horizon_days", c.horizon_days},
          {"initial_infections", c.initial_infections},
          {"master_seed", c.master_seed},
          {"replicates", c.replicates}};
}

}  // namespace ctrace::abm
