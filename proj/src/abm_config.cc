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

#include "ctrace/abm_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "yaml-cpp/yaml.h"

namespace ctrace::abm {
namespace {

absl::Status CheckKeys(const YAML::Node& node, const std::string& section,
                       const std::set<std::string>& allowed) {
  if (!node.IsMap()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("section '%s' must be a mapping", section));
  }
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown key '%s' in '%s'", key, section));
    }
  }
  return absl::OkStatus();
}

template <typename T>
void Read(const YAML::Node& node, const char* key, T& out) {
  if (node[key]) out = node[key].as<T>();
}

absl::StatusOr<ScenarioConfig> FromYaml(const YAML::Node& root) {
  ScenarioConfig c;
  if (absl::Status s = CheckKeys(root, "<root>",
                                 {"population", "adoption", "disease",
                                  "contacts", "course", "tracing", "run"});
      !s.ok()) {
    return s;
  }
  Read(root, "population", c.population);
  Read(root, "adoption", c.adoption);
  if (const YAML::Node d = root["disease"]) {
    if (absl::Status s = CheckKeys(d, "disease", {"r0", "nu"}); !s.ok()) return s;
    Read(d, "r0", c.r0);
    Read(d, "nu", c.nu);
  }
  if (const YAML::Node d = root["contacts"]) {
    if (absl::Status s = CheckKeys(d, "contacts",
                                   {"per_day", "transmission_prob",
                                    "min_minutes", "max_minutes",
                                    "immediate_fraction"});
        !s.ok()) {
      return s;
    }
    Read(d, "per_day", c.contacts_per_day);
    if (d["transmission_prob"]) {
      c.transmission_prob = d["transmission_prob"].as<double>();
    }
    if (d["min_minutes"]) c.min_contact_seconds = d["min_minutes"].as<int64_t>() * 60;
    if (d["max_minutes"]) c.max_contact_seconds = d["max_minutes"].as<int64_t>() * 60;
    Read(d, "immediate_fraction", c.immediate_fraction);
  }
  if (const YAML::Node d = root["course"]) {
    if (absl::Status s = CheckKeys(d, "course",
                                   {"infectious_days", "onset_min_days",
                                    "onset_max_days"});
        !s.ok()) {
      return s;
    }
    Read(d, "infectious_days", c.infectious_days);
    Read(d, "onset_min_days", c.onset_min_days);
    Read(d, "onset_max_days", c.onset_max_days);
  }
  if (const YAML::Node d = root["tracing"]) {
    if (absl::Status s = CheckKeys(d, "tracing",
                                   {"enabled", "quarantine_surfaced",
                                    "quarantine_delay_days", "lookback_days",
                                    "retention_days", "audit", "risk"});
        !s.ok()) {
      return s;
    }
    Read(d, "enabled", c.tracing);
    Read(d, "quarantine_surfaced", c.quarantine_surfaced);
    Read(d, "quarantine_delay_days", c.quarantine_delay_days);
    Read(d, "audit", c.audit);
    if (d["lookback_days"]) {
      c.lookback = d["lookback_days"].as<int64_t>() * kSecondsPerDay;
    }
    if (d["retention_days"]) {
      c.retention = d["retention_days"].as<int64_t>() * kSecondsPerDay;
    }
    if (const YAML::Node r = d["risk"]) {
      if (absl::Status s = CheckKeys(r, "tracing.risk",
                                     {"weight_immediate", "weight_near",
                                      "quarantine_threshold",
                                      "caution_threshold", "infectiousness"});
          !s.ok()) {
        return s;
      }
      Read(r, "weight_immediate", c.risk.weight_immediate);
      Read(r, "weight_near", c.risk.weight_near);
      Read(r, "quarantine_threshold", c.risk.quarantine_threshold);
      Read(r, "caution_threshold", c.risk.caution_threshold);
      Read(r, "infectiousness", c.risk.infectiousness);
    }
  }
  if (const YAML::Node d = root["run"]) {
    if (absl::Status s = CheckKeys(d, "run",
                                   {"horizon_days", "initial_infections",
                                    "master_seed", "replicates"});
        !s.ok()) {
      return s;
    }
    Read(d, "horizon_days", c.horizon_days);
    Read(d, "initial_infections", c.initial_infections);
    Read(d, "master_seed", c.master_seed);
    Read(d, "replicates", c.replicates);
  }
  if (absl::Status s = ValidateConfig(c); !s.ok()) return s;
  return c;
}

}  // namespace

absl::StatusOr<ScenarioConfig> ParseScenarioConfig(std::string_view text) {
  try {
    return FromYaml(YAML::Load(std::string(text)));
  } catch (const YAML::Exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("scenario config: %s", e.what()));
  }
}

absl::StatusOr<ScenarioConfig> LoadScenarioConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseScenarioConfig(buf.str());
}

}  // namespace ctrace::abm
