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

#include "ctrace/contact_types.h"

#include <cmath>

#include "absl/status/status.h"
#include "ctrace/risk.h"

namespace ctrace {

std::string_view ProximityName(Proximity p) {
  switch (p) {
    case Proximity::kImmediate:
      return "immediate";
    case Proximity::kNear:
      return "near";
    case Proximity::kFar:
      return "far";
  }
  return "far";
}

std::optional<Proximity> ParseProximity(std::string_view name) {
  if (name == "immediate") return Proximity::kImmediate;
  if (name == "near") return Proximity::kNear;
  if (name == "far") return Proximity::kFar;
  return std::nullopt;
}

Proximity Categorize(MeasuredDistance d, const DistanceThresholds& t) {
  if (d.meters <= t.immediate_max_m) return Proximity::kImmediate;
  if (d.meters <= t.near_max_m) return Proximity::kNear;
  return Proximity::kFar;
}

absl::StatusOr<ContactEvent> ContactEvent::Create(
    DeviceId a, DeviceId b, int64_t start, int64_t duration,
    std::variant<Proximity, MeasuredDistance> proximity) {
  if (a == b) return absl::InvalidArgumentError("contact with itself");
  if (start < 0) return absl::InvalidArgumentError("negative start time");
  if (duration <= 0) return absl::InvalidArgumentError("duration must be > 0");
  if (const auto* d = std::get_if<MeasuredDistance>(&proximity)) {
    if (!(d->meters >= 0.0) || !std::isfinite(d->meters)) {
      return absl::InvalidArgumentError("distance must be >= 0");
    }
  }
  if (b < a) std::swap(a, b);
  return ContactEvent(a, b, start, duration, proximity);
}

Proximity ContactEvent::proximity(const DistanceThresholds& t) const {
  if (const auto* p = std::get_if<Proximity>(&reading_)) return *p;
  return Categorize(std::get<MeasuredDistance>(reading_), t);
}

absl::StatusOr<CaseRecord> CaseRecord::Create(
    DeviceId device, CaseStatus status, std::optional<int64_t> confirm_time) {
  if ((status == CaseStatus::kUntested) == confirm_time.has_value()) {
    return absl::InvalidArgumentError(
        "confirm_time must be present iff the case was tested");
  }
  return CaseRecord(device, status, confirm_time);
}

std::string_view RiskActionName(RiskAction a) {
  switch (a) {
    case RiskAction::kNone:
      return "none";
    case RiskAction::kNotifyCaution:
      return "notify_caution";
    case RiskAction::kTestAndQuarantine:
      return "test_and_quarantine";
  }
  return "none";
}

double RiskScore(int64_t seconds_immediate, int64_t seconds_near,
                 const RiskConfig& config) {
  const double minutes_imm = static_cast<double>(seconds_immediate) / 60.0;
  const double minutes_near = static_cast<double>(seconds_near) / 60.0;
  return config.infectiousness * (config.weight_immediate * minutes_imm +
                                  config.weight_near * minutes_near);
}

RiskAction ClassifyRisk(double score, const RiskConfig& config) {
  if (score >= config.quarantine_threshold) {
    return RiskAction::kTestAndQuarantine;
  }
  if (score >= config.caution_threshold) return RiskAction::kNotifyCaution;
  return RiskAction::kNone;
}

}  // namespace ctrace
