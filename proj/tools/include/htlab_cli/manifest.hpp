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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace htlab::cli {

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Run record written next to a command's outputs. Output paths are stored
/// relative to the manifest's own directory.
class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::json config, std::uint64_t seed);

  void add_output(const std::filesystem::path& path);
  /// Stamps the finish time, hashes every output and writes the JSON file.
  void write(const std::filesystem::path& path);

 private:
  std::string command_;
  nlohmann::json config_;
  std::uint64_t seed_;
  std::string started_;
  std::vector<std::filesystem::path> outputs_;
};

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Re-hashes every output listed in a manifest.
VerifyReport verify_manifest(const std::filesystem::path& manifest);

std::string utc_timestamp();

}  // namespace htlab::cli
