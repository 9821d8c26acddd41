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

#include <vector>

#include "htlab/image.hpp"
#include "htlab/metrics.hpp"
#include "htlab/rl.hpp"

namespace htlab {
class Rng;
}

namespace htlab::multitone {

/// L equally spaced levels {0, D, 2D, ..., 1}, D = 1 / (L - 1).
class LevelSet {
 public:
  explicit LevelSet(int levels);

  int levels() const noexcept { return levels_; }
  double step() const noexcept { return step_; }
  double value(int index) const;

 private:
  int levels_;
  double step_;
};

/// Mass over the two lattice levels bracketing a value. `lower == upper` when
/// the value sits on the lattice.
struct TwoPoint {
  int lower = 0;
  int upper = 0;
  double p_upper = 0.0;

  double p_lower() const noexcept { return 1.0 - p_upper; }
};

std::vector<TwoPoint> cast_probabilities(const Plane& v, const LevelSet& levels);

/// One uniform per pixel in raster order; upper level when u < p_upper.
MultitoneImage sample_multitone(const std::vector<TwoPoint>& dist, const LevelSet& levels, int width,
                                int height, Rng& rng);

/// dL/dv_a = -(R(upper) - R(lower)) / D.
Plane le_signal_multitone(const std::vector<TwoPoint>& dist, const LevelSet& levels, int width, int height,
                          const metrics::RewardModel& reward);

/// grad_v E[R] by enumerating all 2^N support choices. N <= 20.
Plane exact_gradient_multitone(const Plane& v, const LevelSet& levels, const rl::RewardFn& reward);
double exact_expectation_multitone(const Plane& v, const LevelSet& levels, const rl::RewardFn& reward);

/// Nearest level per pixel (test-time rule).
MultitoneImage round_to_levels(const Plane& v, const LevelSet& levels);

MultitoneImage infer_multitone(const nn::PolicyNetwork& net, const ContoneImage& c, const LevelSet& levels,
                               Rng& rng);

}  // namespace htlab::multitone
