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

#ifndef CTRACE_RISK_H_
#define CTRACE_RISK_H_

#include <cstdint>
#include <string_view>

#include "ctrace/contact_types.h"

namespace ctrace {

enum class RiskAction { kNone, kNotifyCaution, kTestAndQuarantine };

std::string_view RiskActionName(RiskAction a);

// Minutes of immediate and near exposure are weighted and summed. The
// defaults put 30 minutes in the near range exactly at the quarantine
// threshold. `infectiousness` scales every score.
struct RiskConfig {
  double weight_immediate = 4.0;
  double weight_near = 1.0;
  double quarantine_threshold = 30.0;
  double caution_threshold = 5.0;
  double infectiousness = 1.0;
};

// Exposure of one device to another inside a query window. Far contacts
// never contribute.
struct Exposure {
  DeviceId other;
  int64_t seconds_immediate = 0;
  int64_t seconds_near = 0;
  int64_t first_contact = 0;
  int64_t last_contact = 0;
  double score = 0.0;
  RiskAction action = RiskAction::kNone;
};

double RiskScore(int64_t seconds_immediate, int64_t seconds_near,
                 const RiskConfig& config = {});

RiskAction ClassifyRisk(double score, const RiskConfig& config = {});

}  // namespace ctrace

#endif  // CTRACE_RISK_H_
