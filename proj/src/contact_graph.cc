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

#include "ctrace/contact_graph.h"

#include <algorithm>

#include "absl/strings/str_format.h"
#include "ctrace/kernels.h"

namespace ctrace {

bool ContactGraph::PairRecord::empty() const {
  for (const ClassLog& log : by_class) {
    if (!log.raw.empty()) return false;
  }
  return true;
}

void ContactGraph::BeaconLog::Rebuild() {
  starts.clear();
  ends.clear();
  devices.clear();
  for (const BeaconEvent& e : events) {
    starts.push_back(e.time);
    ends.push_back(e.end());
    devices.push_back(e.device);
  }
}

void ContactGraph::Remerge(ClassLog& log) {
  log.merged.clear();
  for (const TimeInterval& iv : log.raw) {
    if (!log.merged.empty() && iv.begin <= log.merged.back().end) {
      log.merged.back().end = std::max(log.merged.back().end, iv.end);
    } else {
      log.merged.push_back(iv);
    }
  }
}

void ContactGraph::DropNeighbor(DeviceId from, DeviceId to) {
  auto it = neighbors_.find(from);
  std::vector<DeviceId>& list = it->second;
  auto pos = std::find(list.begin(), list.end(), to);
  *pos = list.back();
  list.pop_back();
  if (list.empty()) neighbors_.erase(it);
}

void ContactGraph::RegisterBeacon(BeaconId beacon, std::string location) {
  beacons_[beacon].location = std::move(location);
}

const std::string* ContactGraph::BeaconLocation(BeaconId beacon) const {
  auto it = beacons_.find(beacon);
  return it == beacons_.end() ? nullptr : &it->second.location;
}

void ContactGraph::RegisterDevice(DeviceId device, std::string reachability) {
  devices_[device] = std::move(reachability);
}

const std::string* ContactGraph::Reachability(DeviceId device) const {
  auto it = devices_.find(device);
  return it == devices_.end() ? nullptr : &it->second;
}

absl::Status ContactGraph::Ingest(const ContactEvent& event) {
  if (event.a() == event.b()) {
    return absl::InvalidArgumentError("contact with itself");
  }
  devices_.try_emplace(event.a());
  devices_.try_emplace(event.b());
  const int cls = static_cast<int>(event.proximity(options_.distance));
  auto [rec, new_pair] = pairs_.try_emplace(PairKey{event.a(), event.b()});
  ClassLog& log = rec->second.by_class[cls];
  const TimeInterval iv{event.start(), event.end()};
  auto pos = std::lower_bound(log.raw.begin(), log.raw.end(), iv);
  if (pos != log.raw.end() && *pos == iv) return absl::OkStatus();
  log.raw.insert(pos, iv);
  Remerge(log);
  expiry_.push({iv.end, {event.a(), event.b()}});
  if (new_pair) {
    neighbors_[event.a()].push_back(event.b());
    neighbors_[event.b()].push_back(event.a());
  }
  ++contact_events_;
  return absl::OkStatus();
}

absl::Status ContactGraph::Ingest(const BeaconEvent& event) {
  auto it = beacons_.find(event.beacon);
  if (it == beacons_.end()) {
    return absl::NotFoundError(
        absl::StrFormat("beacon %d is not registered", event.beacon.value));
  }
  if (event.time < 0 || event.dwell < 0) {
    return absl::InvalidArgumentError("beacon times must be nonnegative");
  }
  devices_.try_emplace(event.device);
  if (it->second.events.insert(event).second) {
    it->second.Rebuild();
    ++beacon_events_;
  }
  return absl::OkStatus();
}

absl::StatusOr<int64_t> ContactGraph::Purge(int64_t now) {
  if (now < last_purge_) {
    return absl::InvalidArgumentError("purge clock moved backwards");
  }
  last_purge_ = now;
  const int64_t horizon = now - options_.retention;
  int64_t removed = 0;
  while (!expiry_.empty() && expiry_.top().first < horizon) {
    const PairKey key = expiry_.top().second;
    expiry_.pop();
    auto it = pairs_.find(key);
    if (it == pairs_.end()) continue;  // already dropped via another entry
    for (ClassLog& log : it->second.by_class) {
      const size_t before = log.raw.size();
      log.raw.erase(
          std::remove_if(log.raw.begin(), log.raw.end(),
                         [horizon](const TimeInterval& iv) {
                           return iv.end < horizon;
                         }),
          log.raw.end());
      if (log.raw.size() != before) {
        removed += static_cast<int64_t>(before - log.raw.size());
        Remerge(log);
      }
    }
    if (it->second.empty()) {
      const auto [a, b] = key;
      DropNeighbor(a, b);
      DropNeighbor(b, a);
      pairs_.erase(it);
    }
  }
  contact_events_ -= removed;
  int64_t removed_dwells = 0;
  for (auto& [id, log] : beacons_) {
    size_t n = 0;
    for (auto e = log.events.begin(); e != log.events.end();) {
      if (e->end() < horizon) {
        e = log.events.erase(e);
        ++n;
      } else {
        ++e;
      }
    }
    if (n > 0) {
      removed_dwells += static_cast<int64_t>(n);
      log.Rebuild();
    }
  }
  beacon_events_ -= removed_dwells;
  return removed + removed_dwells;
}

ContactsResult ContactGraph::ContactsOf(DeviceId device, int64_t window_end,
                                        int64_t lookback,
                                        const RiskConfig& risk) const {
  ContactsResult result;
  result.device_known = devices_.contains(device);
  auto nit = neighbors_.find(device);
  if (nit == neighbors_.end()) return result;
  const int64_t window_begin = window_end - lookback;
  for (DeviceId other : nit->second) {
    const PairKey key = device < other ? PairKey{device, other}
                                       : PairKey{other, device};
    const PairRecord& rec = pairs_.at(key);
    Exposure exp;
    exp.other = other;
    bool hit = false;
    for (Proximity cls : {Proximity::kImmediate, Proximity::kNear}) {
      int64_t seconds = 0;
      for (const TimeInterval& iv :
           rec.by_class[static_cast<int>(cls)].merged) {
        if (iv.begin > window_end || iv.end < window_begin) continue;
        const int64_t lo = std::max(iv.begin, window_begin);
        const int64_t hi = std::min(iv.end, window_end);
        seconds += hi - lo;
        exp.first_contact = hit ? std::min(exp.first_contact, lo) : lo;
        exp.last_contact = hit ? std::max(exp.last_contact, hi) : hi;
        hit = true;
      }
      if (cls == Proximity::kImmediate) {
        exp.seconds_immediate = seconds;
      } else {
        exp.seconds_near = seconds;
      }
    }
    if (!hit) continue;
    exp.score = RiskScore(exp.seconds_immediate, exp.seconds_near, risk);
    exp.action = ClassifyRisk(exp.score, risk);
    result.contacts.push_back(exp);
  }
  std::sort(result.contacts.begin(), result.contacts.end(),
            [](const Exposure& x, const Exposure& y) {
              if (x.score != y.score) return x.score > y.score;
              return x.other < y.other;
            });
  return result;
}

absl::StatusOr<std::vector<DeviceId>> ContactGraph::BeaconCopresence(
    BeaconId beacon, int64_t begin, int64_t end) const {
  auto it = beacons_.find(beacon);
  if (it == beacons_.end()) {
    return absl::NotFoundError(
        absl::StrFormat("beacon %d is not registered", beacon.value));
  }
  const BeaconLog& log = it->second;
  std::vector<uint8_t> mask(log.starts.size());
  kernels::OverlapMask(log.starts, log.ends, begin, end, mask);
  absl::btree_set<DeviceId> hits;
  for (size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) hits.insert(log.devices[i]);
  }
  return std::vector<DeviceId>(hits.begin(), hits.end());
}

std::vector<TimeInterval> ContactGraph::MergedIntervals(DeviceId a, DeviceId b,
                                                        Proximity p) const {
  if (b < a) std::swap(a, b);
  auto it = pairs_.find({a, b});
  if (it == pairs_.end()) return {};
  const auto& merged = it->second.by_class[static_cast<int>(p)].merged;
  return std::vector<TimeInterval>(merged.begin(), merged.end());
}

bool ContactGraph::SameEvents(const ContactGraph& other) const {
  if (pairs_ != other.pairs_) return false;
  if (beacons_.size() != other.beacons_.size()) return false;
  for (const auto& [id, log] : beacons_) {
    auto it = other.beacons_.find(id);
    if (it == other.beacons_.end() || it->second.events != log.events) {
      return false;
    }
  }
  return true;
}

}  // namespace ctrace
