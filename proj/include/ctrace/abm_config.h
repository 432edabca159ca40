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

#ifndef CTRACE_ABM_CONFIG_H_
#define CTRACE_ABM_CONFIG_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "ctrace/abm.h"

namespace ctrace::abm {

// Scenario files are YAML: top-level keys plus nested sections.
//
//   population: 10000
//   adoption: 0.95
//   disease: {r0: 3, nu: 0.1}
//   contacts: {per_day: 5, min_minutes: 15, max_minutes: 60,
//              immediate_fraction: 0.3, transmission_prob: 0.0857}
//   course: {infectious_days: 7, onset_min_days: 3, onset_max_days: 10}
//   tracing: {enabled: true, quarantine_surfaced: true,
//             quarantine_delay_days: 0, lookback_days: 14,
//             retention_days: 21, audit: false,
//             risk: {weight_immediate: 4, weight_near: 1,
//                    quarantine_threshold: 30, caution_threshold: 5}}
//   run: {horizon_days: 60, initial_infections: 20, master_seed: 1,
//         replicates: 1}
//
// Missing keys keep their defaults; unknown keys are rejected.
absl::StatusOr<ScenarioConfig> ParseScenarioConfig(std::string_view text);
absl::StatusOr<ScenarioConfig> LoadScenarioConfig(const std::string& path);

}  // namespace ctrace::abm

#endif  // CTRACE_ABM_CONFIG_H_
