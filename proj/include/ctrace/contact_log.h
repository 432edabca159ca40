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

#ifndef CTRACE_CONTACT_LOG_H_
#define CTRACE_CONTACT_LOG_H_

#include <istream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "ctrace/cluster_discovery.h"
#include "ctrace/contact_types.h"
#include "json.hpp"

// Line-delimited JSON contact logs:
//   {"type":"contact","a":<u64>,"b":<u64>,"start":<sec>,"dur":<sec>,
//    "prox":"immediate"|"near"|"far"}
//   {"type":"beacon","dev":<u64>,"beacon":<u64>,"time":<sec>,"dwell":<sec>}
//   {"type":"device","dev":<u64>,"name":<string>}
//   {"type":"test","dev":<u64>,"positive":<bool>}
// Test lines hold the result a health authority would get if it tested the
// device; untested devices count as negative.
namespace ctrace {

struct DeviceRecord {
  DeviceId device;
  std::string name;
  bool operator==(const DeviceRecord&) const = default;
};

struct TestRecord {
  DeviceId device;
  bool positive = false;
  bool operator==(const TestRecord&) const = default;
};

using LogEvent = std::variant<ContactEvent, BeaconEvent, DeviceRecord, TestRecord>;

absl::StatusOr<LogEvent> ParseLogLine(std::string_view line);

// Blank lines are skipped. Errors carry the 1-based line number.
absl::StatusOr<std::vector<LogEvent>> ReadContactLog(std::istream& in);

// Contacts carrying a measured distance are written with their category.
std::string FormatLogLine(const LogEvent& event,
                          const DistanceThresholds& thresholds = {});

// {"confirmed","negatives","notified","rounds","edges","complete"}.
nlohmann::json ReportToJson(const ClusterReport& report);

}  // namespace ctrace

#endif  // CTRACE_CONTACT_LOG_H_
