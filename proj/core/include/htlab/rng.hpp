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

#include <array>
#include <cstdint>
#include <limits>
#include <utility>

namespace htlab {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// xoshiro256++ seeded by splitmix64 expansion of a 64-bit seed.
/// Bit-exact across platforms; single owner, not thread safe.
class Rng {
 public:
  using result_type = std::uint64_t;
  using State = std::array<std::uint64_t, 4>;

  explicit Rng(std::uint64_t seed) noexcept;
  static Rng from_state(const State& state) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer on [0, n); n > 0. Unbiased (rejection sampling).
  std::uint64_t uniform_index(std::uint64_t n) noexcept;
  /// Two independent N(0,1) samples via Box-Muller. Consumes exactly two draws.
  std::pair<double, double> normal_pair() noexcept;

  /// Independent child stream. Advances this generator by one draw.
  Rng split() noexcept;

  const State& state() const noexcept { return s_; }

 private:
  Rng() = default;
  State s_{};
};

}  // namespace htlab
