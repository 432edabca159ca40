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

#ifndef CTRACE_CONTACT_TYPES_H_
#define CTRACE_CONTACT_TYPES_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "absl/status/statusor.h"

namespace ctrace {

inline constexpr int64_t kSecondsPerDay = 86400;
inline constexpr int64_t kDefaultRetention = 21 * kSecondsPerDay;
inline constexpr int64_t kDefaultLookback = 14 * kSecondsPerDay;

struct DeviceId {
  uint64_t value = 0;
  auto operator<=>(const DeviceId&) const = default;
  template <typename H>
  friend H AbslHashValue(H h, const DeviceId& id) {
    return H::combine(std::move(h), id.value);
  }
};

struct BeaconId {
  uint64_t value = 0;
  auto operator<=>(const BeaconId&) const = default;
  template <typename H>
  friend H AbslHashValue(H h, const BeaconId& id) {
    return H::combine(std::move(h), id.value);
  }
};

// RSSI distance categories reported by proximity sensing.
enum class Proximity { kImmediate = 0, kNear = 1, kFar = 2 };
inline constexpr int kProximityClasses = 3;

std::string_view ProximityName(Proximity p);
std::optional<Proximity> ParseProximity(std::string_view name);

struct MeasuredDistance {
  double meters = 0.0;
};

// Upper edges of the immediate and near categories, in meters.
struct DistanceThresholds {
  double immediate_max_m = 0.5;
  double near_max_m = 3.0;
};

Proximity Categorize(MeasuredDistance d, const DistanceThresholds& t = {});

// Closed time interval in seconds since the scenario epoch.
struct TimeInterval {
  int64_t begin = 0;
  int64_t end = 0;
  auto operator<=>(const TimeInterval&) const = default;
};

// A recorded proximity contact. Devices are stored with a < b; exactly one of
// a proximity category or a measured distance is carried.
class ContactEvent {
 public:
  static absl::StatusOr<ContactEvent> Create(
      DeviceId a, DeviceId b, int64_t start, int64_t duration,
      std::variant<Proximity, MeasuredDistance> proximity);

  DeviceId a() const { return a_; }
  DeviceId b() const { return b_; }
  int64_t start() const { return start_; }
  int64_t duration() const { return duration_; }
  int64_t end() const { return start_ + duration_; }
  const std::variant<Proximity, MeasuredDistance>& reading() const {
    return reading_;
  }
  Proximity proximity(const DistanceThresholds& t = {}) const;

 private:
  ContactEvent(DeviceId a, DeviceId b, int64_t start, int64_t duration,
               std::variant<Proximity, MeasuredDistance> reading)
      : a_(a), b_(b), start_(start), duration_(duration), reading_(reading) {}

  DeviceId a_;
  DeviceId b_;
  int64_t start_;
  int64_t duration_;
  std::variant<Proximity, MeasuredDistance> reading_;
};

// A device dwelling near a fixed-location beacon.
struct BeaconEvent {
  DeviceId device;
  BeaconId beacon;
  int64_t time = 0;
  int64_t dwell = 0;

  int64_t end() const { return time + dwell; }
  auto operator<=>(const BeaconEvent&) const = default;
};

enum class CaseStatus { kConfirmedPositive, kTestedNegative, kUntested };

class CaseRecord {
 public:
  // confirm_time must be present iff status != kUntested.
  static absl::StatusOr<CaseRecord> Create(DeviceId device, CaseStatus status,
                                           std::optional<int64_t> confirm_time);
  static CaseRecord Confirmed(DeviceId device, int64_t time) {
    return CaseRecord(device, CaseStatus::kConfirmedPositive, time);
  }

  DeviceId device() const { return device_; }
  CaseStatus status() const { return status_; }
  std::optional<int64_t> confirm_time() const { return confirm_time_; }

 private:
  CaseRecord(DeviceId device, CaseStatus status, std::optional<int64_t> t)
      : device_(device), status_(status), confirm_time_(t) {}

  DeviceId device_;
  CaseStatus status_;
  std::optional<int64_t> confirm_time_;
};

}  // namespace ctrace

#endif  // CTRACE_CONTACT_TYPES_H_
