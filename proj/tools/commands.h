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


#ifndef CTRACE_TOOLS_COMMANDS_H_
#define CTRACE_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "manifest.h"

namespace ctrace::cli {

const char* ToolVersion();

struct OutputFile {
  std::string name;
  std::string bytes;
};

struct CommandResult {
  std::vector<OutputFile> outputs;  // the first one is echoed to stdout
  std::vector<FileDigest> inputs;
  std::optional<uint64_t> master_seed;
};

// Runs one command from its canonical parameter object. The command line and
// manifest replay both come through here.
absl::StatusOr<CommandResult> Execute(const std::string& command,
                                      const nlohmann::json& params);

// Execute, then write every output and manifest.json into out_dir.
absl::StatusOr<Manifest> ExecuteAndWrite(const std::string& command,
                                         const nlohmann::json& params,
                                         const std::string& out_dir,
                                         CommandResult* result = nullptr);

struct ReplayReport {
  Manifest original;
  Manifest replayed;
  std::vector<std::string> mismatches;  // empty means byte-identical
};

// Reruns the manifest's command into out_dir and compares output digests.
absl::StatusOr<ReplayReport> Replay(const std::string& manifest_path,
                                    const std::string& out_dir);

// 0 on success, 2 on invalid input, 1 on other failures or a replay
// mismatch.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace ctrace::cli

#endif  // CTRACE_TOOLS_COMMANDS_H_
