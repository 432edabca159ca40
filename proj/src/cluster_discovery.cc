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

#include "ctrace/cluster_discovery.h"

#include <algorithm>

#include "absl/container/btree_map.h"
#include "absl/container/btree_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ctrace {

absl::StatusOr<ClusterReport> DiscoverCluster(const CaseRecord& seed,
                                              const ContactGraph& graph,
                                              const TestOracle& oracle,
                                              int64_t now,
                                              const DiscoveryOptions& options) {
  if (seed.status() != CaseStatus::kConfirmedPositive) {
    return absl::InvalidArgumentError("seed case must be confirmed positive");
  }
  ClusterReport report;
  absl::btree_set<DeviceId> confirmed = {seed.device()};
  absl::btree_set<DeviceId> negatives;
  absl::btree_set<DeviceId> failed;
  absl::btree_map<DeviceId, Notification> at_risk;
  // Exposures seen from each expanded case, kept for the edge list.
  absl::btree_map<DeviceId, std::vector<Exposure>> expanded;

  std::vector<DeviceId> frontier = {seed.device()};
  while (!frontier.empty()) {
    ++report.rounds;
    std::vector<DeviceId> next;
    for (DeviceId c : frontier) {
      ContactsResult contacts =
          graph.ContactsOf(c, now, options.lookback, options.risk);
      for (const Exposure& e : contacts.contacts) {
        if (e.action == RiskAction::kNone) continue;
        Notification& n = at_risk[e.other];
        n.device = e.other;
        if (e.score > n.score) {
          n.score = e.score;
          n.action = e.action;
        }
        if (confirmed.contains(e.other) || negatives.contains(e.other) ||
            failed.contains(e.other)) {
          continue;
        }
        absl::StatusOr<bool> positive = oracle(e.other, now);
        if (!positive.ok()) {
          failed.insert(e.other);
          report.complete = false;
          report.errors.push_back(absl::StrFormat(
              "device %d: %s", e.other.value, positive.status().ToString()));
          continue;
        }
        if (*positive) {
          confirmed.insert(e.other);
          next.push_back(e.other);
        } else {
          negatives.insert(e.other);
        }
      }
      expanded[c] = std::move(contacts.contacts);
    }
    frontier = std::move(next);
  }

  report.confirmed.assign(confirmed.begin(), confirmed.end());
  report.negatives.assign(negatives.begin(), negatives.end());
  for (const auto& [device, n] : at_risk) {
    if (!confirmed.contains(device)) report.notified.push_back(n);
  }
  for (const auto& [device, exposures] : expanded) {
    for (const Exposure& e : exposures) {
      if (!(device < e.other) || !confirmed.contains(e.other)) continue;
      report.edges.push_back({device, e.other, e.seconds_immediate,
                              e.seconds_near, e.first_contact, e.last_contact});
    }
  }
  return report;
}

template <typename Fn>
auto ContactServer::Mutate(Fn&& fn) {
  std::unique_lock lock(mu_);
  if (graph_.use_count() > 1) graph_ = std::make_shared<ContactGraph>(*graph_);
  return fn(*graph_);
}

absl::Status ContactServer::RegisterBeacon(BeaconId beacon,
                                           std::string location) {
  return Mutate([&](ContactGraph& g) {
    g.RegisterBeacon(beacon, std::move(location));
    return absl::OkStatus();
  });
}

absl::Status ContactServer::Ingest(const ContactEvent& event) {
  return Mutate([&](ContactGraph& g) { return g.Ingest(event); });
}

absl::Status ContactServer::Ingest(const BeaconEvent& event) {
  return Mutate([&](ContactGraph& g) { return g.Ingest(event); });
}

absl::StatusOr<int64_t> ContactServer::Purge(int64_t now) {
  return Mutate([&](ContactGraph& g) { return g.Purge(now); });
}

std::shared_ptr<const ContactGraph> ContactServer::Snapshot() const {
  std::shared_lock lock(mu_);
  return graph_;
}

absl::StatusOr<ClusterReport> ContactServer::Discover(
    const CaseRecord& seed, const TestOracle& oracle, int64_t now,
    const DiscoveryOptions& options) const {
  std::shared_ptr<const ContactGraph> snapshot = Snapshot();
  return DiscoverCluster(seed, *snapshot, oracle, now, options);
}

}  // namespace ctrace
