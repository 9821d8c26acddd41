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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "htlab/rl.hpp"

namespace htlab::cli {

/// Line-based `key = value` training config. `#` starts a comment, blank lines
/// are ignored, and every key must belong to the fixed schema.
rl::TrainConfig parse_train_config(std::string_view text);
rl::TrainConfig load_train_config(const std::filesystem::path& path);

/// Canonical text form; parse_train_config(format_train_config(c)) == c.
std::string format_train_config(const rl::TrainConfig& config);

const std::vector<std::string>& train_config_keys();

}  // namespace htlab::cli
