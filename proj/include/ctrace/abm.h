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

#ifndef CTRACE_ABM_H_
#define CTRACE_ABM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ctrace/contact_types.h"
#include "ctrace/risk.h"
#include "json.hpp"

// Agent-based harness coupling disease spread with the tracing protocol.
// Agents mix uniformly; every contact between two adopters is recorded on the
// contact server; severe cases surface after an onset delay and trigger
// cluster discovery, and confirmed infectious agents are quarantined.
namespace ctrace::abm {

enum class AgentState { kSusceptible, kInfected, kQuarantined, kRecovered };

struct ScenarioConfig {
  int64_t population = 10000;
  double adoption = 0.95;
  double r0 = 3.0;
  double nu = 0.1;

  // Each non-quarantined agent takes part in this many contacts per day on
  // average. contacts_per_day * transmission_prob * infectious_days == r0;
  // the probability is derived when not given.
  double contacts_per_day = 5.0;
  std::optional<double> transmission_prob;
  int64_t min_contact_seconds = 15 * 60;
  int64_t max_contact_seconds = 60 * 60;
  double immediate_fraction = 0.3;

  // Infected on day t: infectious on days t+1 .. t+infectious_days, then
  // recovered. Severe cases surface on day t + U{onset_min, onset_max}.
  int infectious_days = 7;
  int onset_min_days = 3;
  int onset_max_days = 10;

  bool tracing = true;
  bool quarantine_surfaced = true;
  int quarantine_delay_days = 0;
  int64_t lookback = kDefaultLookback;
  int64_t retention = kDefaultRetention;
  RiskConfig risk;

  int horizon_days = 60;
  int64_t initial_infections = 20;
  uint64_t master_seed = 1;
  int replicates = 1;

  // Recheck every discovery against a brute-force closure and the ground-truth
  // infection tree.
  bool audit = false;

  double TransmissionProb() const;
};

// Rejects configs that break the calibration identity or basic ranges.
absl::Status ValidateConfig(const ScenarioConfig& config);

struct DayCounts {
  int day = 0;
  int64_t new_infections = 0;
  int64_t active = 0;  // infected and not quarantined
  int64_t quarantined = 0;
  int64_t susceptible = 0;
  int64_t recovered = 0;
  double susceptible_share = 0.0;  // susceptible / non-quarantined
  bool operator==(const DayCounts&) const = default;
};

struct InfectionRecord {
  uint64_t agent = 0;
  std::optional<uint64_t> infector;
  uint64_t root = 0;  // seeded infection heading this agent's infection tree
  int day = 0;
  int generation = 0;
  bool adopter = false;
  bool severe = false;
  int onset_delay = 0;
  int64_t offspring = 0;
  std::optional<int> quarantined_day;
  std::optional<int> confirmed_day;
  // Interval of the contact that transmitted the infection; absent for seeds.
  std::optional<TimeInterval> transmission;
  bool transmission_immediate = false;
  bool operator==(const InfectionRecord&) const = default;
};

struct ClusterRecord {
  int day = 0;
  uint64_t trigger = 0;
  int64_t size_at_discovery = 0;  // confirmed by this discovery
  int64_t newly_quarantined = 0;
  int rounds = 0;
  uint64_t root = 0;
  int origin_day = 0;  // infection day of the tree root
  int delay_days = 0;  // discovery day - origin day
  int64_t tree_size = 0;  // tree members infected so far
  int64_t tree_confirmed = 0;
  double fraction_traced = 0.0;
  std::optional<int64_t> first_severe_index;  // 1-based, infection order
  // Audit results (zero when auditing is off).
  int64_t closure_mismatches = 0;
  int64_t missed_chain_members = 0;
  bool operator==(const ClusterRecord&) const = default;
};

struct EpidemicTrace {
  uint64_t seed = 0;
  int horizon_days = 0;
  int infectious_days = 0;
  std::vector<DayCounts> days;
  std::vector<InfectionRecord> infections;
  std::vector<ClusterRecord> clusters;
  bool conservation_held = true;
  int64_t post_quarantine_transmissions = 0;
  // Infectious agents still free at the horizon whose tree has a confirmed
  // member; reported, since the lookback can cut old branches.
  int64_t undiscovered_active_in_discovered_trees = 0;
  // Confirmed agents still infectious and free at the horizon. Nonzero only
  // with a quarantine delay.
  int64_t confirmed_free_at_horizon = 0;
  bool operator==(const EpidemicTrace&) const = default;
};

// Runs one scenario with config.master_seed. Deterministic.
absl::StatusOr<EpidemicTrace> RunScenario(const ScenarioConfig& config);

// Runs config.replicates scenarios; replicate i is seeded with
// DeriveSeed(config.master_seed, i). Results are in replicate order and do
// not depend on the worker count; 0 workers picks the hardware concurrency.
absl::StatusOr<std::vector<EpidemicTrace>> RunReplicates(
    const ScenarioConfig& config, int workers = 1);

struct ReproductionEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int64_t traces = 0;
  int64_t completed_infectors = 0;
  int max_generation = 0;
  bool low_confidence = false;
};

// Realized reproduction ratio: offspring per completed infector, with each
// infector weighted by the susceptible share over its infectious window.
// Only infectors whose infectious window closed before the horizon count.
// Aggregated over traces with a t interval.
ReproductionEstimate MeasureRe(std::span<const EpidemicTrace> traces);

// `day,new_inf,active,quarantined`.
std::string TraceCsv(const EpidemicTrace& trace);
nlohmann::json ClusterRecordsJson(const EpidemicTrace& trace);
nlohmann::json ConfigToJson(const ScenarioConfig& config);

}  // namespace ctrace::abm

#endif  // CTRACE_ABM_H_
