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


#ifndef CTRACE_TOOLS_MANIFEST_H_
#define CTRACE_TOOLS_MANIFEST_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace ctrace::cli {

inline constexpr char kManifestFile[] = "manifest.json";

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view bytes);

struct FileDigest {
  std::string name;
  std::string sha256;
  int64_t bytes = 0;
};

// Everything needed to rerun a command and check its outputs. Inputs are
// files the command read; replay refuses to run if they changed.
struct Manifest {
  std::string command;
  nlohmann::json params;
  std::optional<uint64_t> master_seed;
  std::string version;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
};

nlohmann::json ManifestToJson(const Manifest& m);
absl::StatusOr<Manifest> ManifestFromJson(const nlohmann::json& j);

}  // namespace ctrace::cli

#endif  // CTRACE_TOOLS_MANIFEST_H_
