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

#ifndef CTRACE_CLUSTER_DISCOVERY_H_
#define CTRACE_CLUSTER_DISCOVERY_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ctrace/contact_graph.h"
#include "ctrace/contact_types.h"
#include "ctrace/risk.h"

namespace ctrace {

// Test result for a device at time `now`: true for positive, false for
// negative, an error status when the test could not be performed.
using TestOracle = std::function<absl::StatusOr<bool>(DeviceId, int64_t now)>;

struct DiscoveryOptions {
  int64_t lookback = kDefaultLookback;  // both upstream and downstream
  RiskConfig risk;
};

struct Notification {
  DeviceId device;
  double score = 0.0;
  RiskAction action = RiskAction::kNone;
};

// Undirected contact between two confirmed cases. Direction of infection is
// not inferred.
struct ClusterEdge {
  DeviceId a;
  DeviceId b;
  int64_t seconds_immediate = 0;
  int64_t seconds_near = 0;
  int64_t first_contact = 0;
  int64_t last_contact = 0;
};

struct ClusterReport {
  std::vector<DeviceId> confirmed;  // ascending, includes the seed
  std::vector<DeviceId> negatives;  // ascending
  std::vector<Notification> notified;  // at-risk contacts not confirmed
  int rounds = 0;
  std::vector<ClusterEdge> edges;
  bool complete = true;  // false if the oracle failed for some device
  std::vector<std::string> errors;
};

// Alternates downstream and upstream tracing from a confirmed case until no
// new positives appear. Each round expands every case confirmed in the
// previous round: its contacts at or above the caution threshold are tested,
// and positives join the next frontier.
absl::StatusOr<ClusterReport> DiscoverCluster(const CaseRecord& seed,
                                              const ContactGraph& graph,
                                              const TestOracle& oracle,
                                              int64_t now,
                                              const DiscoveryOptions& options = {});

// Single writer, many readers. Queries run on a snapshot taken at call time.
class ContactServer {
 public:
  explicit ContactServer(GraphOptions options = {})
      : graph_(std::make_shared<ContactGraph>(options)) {}

  absl::Status RegisterBeacon(BeaconId beacon, std::string location);
  absl::Status Ingest(const ContactEvent& event);
  absl::Status Ingest(const BeaconEvent& event);
  absl::StatusOr<int64_t> Purge(int64_t now);

  std::shared_ptr<const ContactGraph> Snapshot() const;

  absl::StatusOr<ClusterReport> Discover(const CaseRecord& seed,
                                         const TestOracle& oracle, int64_t now,
                                         const DiscoveryOptions& options = {})
      const;

 private:
  // Copy-on-write: writers clone the graph if a snapshot still refers to it.
  template <typename Fn>
  auto Mutate(Fn&& fn);

  mutable std::shared_mutex mu_;
  std::shared_ptr<ContactGraph> graph_;
};

}  // namespace ctrace

#endif  // CTRACE_CLUSTER_DISCOVERY_H_
