// Copyright 2026 The htlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "htlab_cli/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "htlab/error.hpp"
#include "htlab/netpbm.hpp"

#ifndef HTLAB_VERSION
#define HTLAB_VERSION "unknown"
#endif

namespace htlab::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest::RunManifest(std::string command, nlohmann::json config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed), started_(utc_timestamp()) {}

void RunManifest::add_output(const fs::path& path) { outputs_.push_back(path); }

void RunManifest::write(const fs::path& path) {
  const fs::path base = fs::absolute(path).parent_path();
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& out : outputs_) {
    const auto bytes = read_file(out);
    outputs.push_back({{"path", fs::absolute(out).lexically_normal().lexically_relative(base).generic_string()},
                       {"bytes", bytes.size()},
                       {"sha256", sha256_hex(bytes)}});
  }
  const nlohmann::json doc = {{"command", command_},
                              {"version", HTLAB_VERSION},
                              {"seed", seed_},
                              {"config", config_},
                              {"started_utc", started_},
                              {"finished_utc", utc_timestamp()},
                              {"outputs", outputs}};
  const std::string text = doc.dump(2) + "\n";
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

VerifyReport verify_manifest(const fs::path& manifest) {
  const auto bytes = read_file(manifest);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("outputs") || !doc["outputs"].is_array()) {
    throw FormatError("manifest has no outputs array");
  }
  VerifyReport report;
  const fs::path base = fs::absolute(manifest).parent_path();
  for (const auto& entry : doc["outputs"]) {
    if (!entry.contains("path") || !entry.contains("sha256")) throw FormatError("manifest output entry incomplete");
    const fs::path rel = entry["path"].get<std::string>();
    const fs::path file = base / rel;
    ++report.checked;
    if (!fs::exists(file)) {
      report.problems.push_back(rel.generic_string() + ": missing");
      continue;
    }
    if (sha256_file(file) != entry["sha256"].get<std::string>()) {
      report.problems.push_back(rel.generic_string() + ": hash mismatch");
    }
  }
  return report;
}

}  // namespace htlab::cli
