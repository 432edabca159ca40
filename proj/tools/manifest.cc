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


#include "manifest.h"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ctrace::cli {

std::string Sha256Hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += absl::StrFormat("%02x", md[i]);
  return hex;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteFile(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) return absl::InternalError(absl::StrFormat("cannot write %s", path));
  return absl::OkStatus();
}

namespace {

nlohmann::json DigestsToJson(const std::vector<FileDigest>& files) {
  nlohmann::json arr = nlohmann::json::array();
  for (const FileDigest& f : files) {
    arr.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  return arr;
}

absl::StatusOr<std::vector<FileDigest>> DigestsFromJson(const nlohmann::json& j) {
  if (!j.is_array()) return absl::InvalidArgumentError("digest list expected");
  std::vector<FileDigest> out;
  for (const nlohmann::json& f : j) {
    if (!f.is_object() || !f.contains("file") || !f.contains("sha256") ||
        !f["file"].is_string() || !f["sha256"].is_string()) {
      return absl::InvalidArgumentError("malformed digest entry");
    }
    out.push_back({f["file"].get<std::string>(), f["sha256"].get<std::string>(),
                   f.value("bytes", int64_t{0})});
  }
  return out;
}

}  // namespace

nlohmann::json ManifestToJson(const Manifest& m) {
  return {{"command", m.command},
          {"params", m.params},
          {"master_seed", m.master_seed ? nlohmann::json(*m.master_seed)
                                        : nlohmann::json(nullptr)},
          {"tool", "ctrace"},
          {"version", m.version},
          {"inputs", DigestsToJson(m.inputs)},
          {"outputs", DigestsToJson(m.outputs)}};
}

absl::StatusOr<Manifest> ManifestFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string() ||
      !j.contains("params") || !j["params"].is_object() ||
      !j.contains("version") || !j["version"].is_string()) {
    return absl::InvalidArgumentError("not a ctrace manifest");
  }
  Manifest m;
  m.command = j["command"].get<std::string>();
  m.params = j["params"];
  m.version = j["version"].get<std::string>();
  if (j.contains("master_seed") && j["master_seed"].is_number_unsigned()) {
    m.master_seed = j["master_seed"].get<uint64_t>();
  }
  for (const char* key : {"inputs", "outputs"}) {
    absl::StatusOr<std::vector<FileDigest>> d =
        DigestsFromJson(j.value(key, nlohmann::json::array()));
    if (!d.ok()) return d.status();
    (std::string(key) == "inputs" ? m.inputs : m.outputs) = *std::move(d);
  }
  return m;
}

}  // namespace ctrace::cli
