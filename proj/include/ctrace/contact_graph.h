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

#ifndef CTRACE_CONTACT_GRAPH_H_
#define CTRACE_CONTACT_GRAPH_H_

#include <array>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/btree_map.h"
#include "absl/container/btree_set.h"
#include "absl/container/flat_hash_map.h"
#include "absl/container/inlined_vector.h"
#include "absl/container/node_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ctrace/contact_types.h"
#include "ctrace/risk.h"

namespace ctrace {

struct GraphOptions {
  int64_t retention = kDefaultRetention;
  DistanceThresholds distance;
};

struct ContactsResult {
  // False when the device never appeared: non-adopters are invisible.
  bool device_known = false;
  std::vector<Exposure> contacts;  // descending score, then ascending id
};

// Server-side store of recorded contacts and beacon dwells.
//
// Raw events are kept per (pair, proximity class), deduplicated; the merged
// view joins overlapping or touching intervals of the same class. Purging
// drops raw events whose end lies before now - retention and rebuilds the
// merged view, so ingest-then-purge equals ingesting only the fresh events.
class ContactGraph {
 public:
  explicit ContactGraph(GraphOptions options = {}) : options_(options) {}

  // Beacons must be registered before their dwell events are ingested.
  void RegisterBeacon(BeaconId beacon, std::string location);
  bool HasBeacon(BeaconId beacon) const { return beacons_.contains(beacon); }
  const std::string* BeaconLocation(BeaconId beacon) const;

  // How the server reaches a device's owner. Ingestion registers unknown
  // devices with an empty record.
  void RegisterDevice(DeviceId device, std::string reachability);
  const std::string* Reachability(DeviceId device) const;
  bool KnowsDevice(DeviceId device) const { return devices_.contains(device); }

  // Idempotent under exact duplicates.
  absl::Status Ingest(const ContactEvent& event);
  absl::Status Ingest(const BeaconEvent& event);

  // Removes every event ending strictly before now - retention; events ending
  // exactly at the horizon are kept. Returns the number removed.
  absl::StatusOr<int64_t> Purge(int64_t now);

  // Non-far exposure of `device` to each contact whose merged interval meets
  // [window_end - lookback, window_end]; durations are clipped to the window.
  ContactsResult ContactsOf(DeviceId device, int64_t window_end,
                            int64_t lookback = kDefaultLookback,
                            const RiskConfig& risk = {}) const;

  // Devices whose dwell at `beacon` meets [begin, end].
  absl::StatusOr<std::vector<DeviceId>> BeaconCopresence(BeaconId beacon,
                                                         int64_t begin,
                                                         int64_t end) const;

  // Merged intervals for an unordered pair in one proximity class.
  std::vector<TimeInterval> MergedIntervals(DeviceId a, DeviceId b,
                                            Proximity p) const;

  int64_t contact_event_count() const { return contact_events_; }
  int64_t beacon_event_count() const { return beacon_events_; }
  int64_t pair_count() const { return static_cast<int64_t>(pairs_.size()); }
  const GraphOptions& options() const { return options_; }

  // Stored events compare equal. Registries and purge clocks are ignored.
  bool SameEvents(const ContactGraph& other) const;

 private:
  using PairKey = std::pair<DeviceId, DeviceId>;

  struct ClassLog {
    absl::InlinedVector<TimeInterval, 1> raw;     // sorted, unique
    absl::InlinedVector<TimeInterval, 1> merged;  // sorted, disjoint
    bool operator==(const ClassLog& o) const { return raw == o.raw; }
  };
  struct PairRecord {
    std::array<ClassLog, kProximityClasses> by_class;
    bool empty() const;
    bool operator==(const PairRecord&) const = default;
  };
  struct BeaconLog {
    std::string location;
    absl::btree_set<BeaconEvent> events;
    // Structure-of-arrays view scanned by the overlap kernel.
    std::vector<int64_t> starts;
    std::vector<int64_t> ends;
    std::vector<DeviceId> devices;
    void Rebuild();
  };

  static void Remerge(ClassLog& log);
  void DropNeighbor(DeviceId from, DeviceId to);

  GraphOptions options_;
  absl::node_hash_map<PairKey, PairRecord> pairs_;
  // (end, pair) per stored raw interval, earliest end on top. Lets Purge
  // visit only the pairs that hold something stale.
  using Expiry = std::pair<int64_t, PairKey>;
  std::priority_queue<Expiry, std::vector<Expiry>, std::greater<Expiry>>
      expiry_;
  // Unordered; ContactsOf sorts its output.
  absl::flat_hash_map<DeviceId, std::vector<DeviceId>> neighbors_;
  absl::flat_hash_map<DeviceId, std::string> devices_;
  absl::btree_map<BeaconId, BeaconLog> beacons_;
  int64_t contact_events_ = 0;
  int64_t beacon_events_ = 0;
  int64_t last_purge_ = INT64_MIN;
};

}  // namespace ctrace

#endif  // CTRACE_CONTACT_GRAPH_H_
