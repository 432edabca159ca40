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

#include "ctrace/contact_log.h"

#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ctrace {
namespace {

using nlohmann::json;

absl::Status ExpectKeys(const json& j, const std::set<std::string>& keys) {
  if (j.size() != keys.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected exactly %d fields", keys.size()));
  }
  for (const auto& [k, v] : j.items()) {
    if (!keys.contains(k)) {
      return absl::InvalidArgumentError(absl::StrFormat("unknown field '%s'", k));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> U64(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("field '%s' must be a nonnegative integer", key));
  }
  return v.get<uint64_t>();
}

absl::StatusOr<int64_t> Seconds(const json& j, const char* key) {
  absl::StatusOr<uint64_t> v = U64(j, key);
  if (!v.ok()) return v.status();
  return static_cast<int64_t>(*v);
}

}  // namespace

absl::StatusOr<LogEvent> ParseLogLine(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("not a JSON object");
  }
  if (!j.contains("type") || !j["type"].is_string()) {
    return absl::InvalidArgumentError("missing 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "contact") {
    if (absl::Status s = ExpectKeys(j, {"type", "a", "b", "start", "dur", "prox"});
        !s.ok()) {
      return s;
    }
    absl::StatusOr<uint64_t> a = U64(j, "a");
    absl::StatusOr<uint64_t> b = U64(j, "b");
    absl::StatusOr<int64_t> start = Seconds(j, "start");
    absl::StatusOr<int64_t> dur = Seconds(j, "dur");
    for (const absl::Status& s :
         {a.status(), b.status(), start.status(), dur.status()}) {
      if (!s.ok()) return s;
    }
    if (!j["prox"].is_string()) {
      return absl::InvalidArgumentError("'prox' must be a string");
    }
    std::optional<Proximity> prox = ParseProximity(j["prox"].get<std::string>());
    if (!prox) return absl::InvalidArgumentError("unknown proximity class");
    absl::StatusOr<ContactEvent> ev =
        ContactEvent::Create(DeviceId{*a}, DeviceId{*b}, *start, *dur, *prox);
    if (!ev.ok()) return ev.status();
    return LogEvent(*ev);
  }
  if (type == "beacon") {
    if (absl::Status s = ExpectKeys(j, {"type", "dev", "beacon", "time", "dwell"});
        !s.ok()) {
      return s;
    }
    absl::StatusOr<uint64_t> dev = U64(j, "dev");
    absl::StatusOr<uint64_t> beacon = U64(j, "beacon");
    absl::StatusOr<int64_t> time = Seconds(j, "time");
    absl::StatusOr<int64_t> dwell = Seconds(j, "dwell");
    for (const absl::Status& s :
         {dev.status(), beacon.status(), time.status(), dwell.status()}) {
      if (!s.ok()) return s;
    }
    return LogEvent(BeaconEvent{DeviceId{*dev}, BeaconId{*beacon}, *time, *dwell});
  }
  if (type == "device") {
    if (absl::Status s = ExpectKeys(j, {"type", "dev", "name"}); !s.ok()) return s;
    absl::StatusOr<uint64_t> dev = U64(j, "dev");
    if (!dev.ok()) return dev.status();
    if (!j["name"].is_string() || j["name"].get<std::string>().empty()) {
      return absl::InvalidArgumentError("'name' must be a nonempty string");
    }
    return LogEvent(DeviceRecord{DeviceId{*dev}, j["name"].get<std::string>()});
  }
  if (type == "test") {
    if (absl::Status s = ExpectKeys(j, {"type", "dev", "positive"}); !s.ok()) {
      return s;
    }
    absl::StatusOr<uint64_t> dev = U64(j, "dev");
    if (!dev.ok()) return dev.status();
    if (!j["positive"].is_boolean()) {
      return absl::InvalidArgumentError("'positive' must be a boolean");
    }
    return LogEvent(TestRecord{DeviceId{*dev}, j["positive"].get<bool>()});
  }
  return absl::InvalidArgumentError(absl::StrFormat("unknown type '%s'", type));
}

absl::StatusOr<std::vector<LogEvent>> ReadContactLog(std::istream& in) {
  std::vector<LogEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    absl::StatusOr<LogEvent> ev = ParseLogLine(line);
    if (!ev.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: %s", line_no, ev.status().message()));
    }
    events.push_back(*std::move(ev));
  }
  return events;
}

std::string FormatLogLine(const LogEvent& event,
                          const DistanceThresholds& thresholds) {
  json j;
  if (const auto* c = std::get_if<ContactEvent>(&event)) {
    j = {{"type", "contact"},
         {"a", c->a().value},
         {"b", c->b().value},
         {"start", c->start()},
         {"dur", c->duration()},
         {"prox", std::string(ProximityName(c->proximity(thresholds)))}};
  } else if (const auto* b = std::get_if<BeaconEvent>(&event)) {
    j = {{"type", "beacon"},
         {"dev", b->device.value},
         {"beacon", b->beacon.value},
         {"time", b->time},
         {"dwell", b->dwell}};
  } else if (const auto* d = std::get_if<DeviceRecord>(&event)) {
    j = {{"type", "device"}, {"dev", d->device.value}, {"name", d->name}};
  } else {
    const TestRecord& t = std::get<TestRecord>(event);
    j = {{"type", "test"}, {"dev", t.device.value}, {"positive", t.positive}};
  }
  return j.dump();
}

nlohmann::json ReportToJson(const ClusterReport& report) {
  json out;
  auto ids = [](const std::vector<DeviceId>& v) {
    json arr = json::array();
    for (DeviceId d : v) arr.push_back(d.value);
    return arr;
  };
  out["confirmed"] = ids(report.confirmed);
  out["negatives"] = ids(report.negatives);
  json notified = json::array();
  for (const Notification& n : report.notified) {
    notified.push_back({{"device", n.device.value},
                        {"score", n.score},
                        {"action", std::string(RiskActionName(n.action))}});
  }
  out["notified"] = notified;
  out["rounds"] = report.rounds;
  json edges = json::array();
  for (const ClusterEdge& e : report.edges) {
    edges.push_back({{"a", e.a.value},
                     {"b", e.b.value},
                     {"seconds_immediate", e.seconds_immediate},
                     {"seconds_near", e.seconds_near},
                     {"first_contact", e.first_contact},
                     {"last_contact", e.last_contact}});
  }
  out["edges"] = edges;
  out["complete"] = report.complete;
  if (!report.errors.empty()) out["errors"] = report.errors;
  return out;
}

}  // namespace ctrace
