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
#include <vector>

#include "htlab/nn.hpp"
#include "htlab/rng.hpp"

namespace htlab::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam.
class Adam {
 public:
  explicit Adam(std::size_t parameter_count, AdamConfig config = {});

  void step(std::span<double> params, std::span<const double> grads, double lr);

  const AdamConfig& config() const noexcept { return config_; }
  std::uint64_t steps() const noexcept { return t_; }
  const std::vector<double>& first_moment() const noexcept { return m_; }
  const std::vector<double>& second_moment() const noexcept { return v_; }

  void restore(std::vector<double> m, std::vector<double> v, std::uint64_t steps);

 private:
  AdamConfig config_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

struct CosineSchedule {
  double start = 3e-4;
  double end = 1e-5;
  std::int64_t total = 200000;

  /// end + (start - end) * (1 + cos(pi t / T)) / 2, clamped to `end` past T.
  double at(std::int64_t t) const;
};

/// Resumable training position stored alongside the weights.
struct TrainingState {
  std::int64_t iteration = 0;
  Rng::State rng{};
};

/// Binary layout, little-endian throughout:
///   "HTNN" | u32 version | u32 channels | u32 blocks | i64 iteration |
///   4 x u64 rng state | u64 adam steps | u64 count |
///   count x f64 params | count x f64 adam m | count x f64 adam v
void save_checkpoint(const std::filesystem::path& path, const PolicyNetwork& net, const Adam& adam,
                     const TrainingState& state);
std::vector<std::uint8_t> encode_checkpoint(const PolicyNetwork& net, const Adam& adam,
                                            const TrainingState& state);

struct Checkpoint {
  ArchConfig arch;
  std::vector<double> params;
  std::vector<double> m, v;
  std::uint64_t adam_steps = 0;
  TrainingState state;
};

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Loads into existing objects. FormatError for a damaged file, ShapeError if
/// the stored architecture differs from `net`.
TrainingState load_checkpoint(const std::filesystem::path& path, PolicyNetwork& net, Adam& adam);

inline constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace htlab::nn
