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

#include "htlab/multitone.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "htlab/error.hpp"
#include "htlab/rng.hpp"

namespace htlab::multitone {

LevelSet::LevelSet(int levels) : levels_(levels), step_(0.0) {
  if (levels < 2) throw PreconditionError("need at least 2 levels, got " + std::to_string(levels));
  step_ = 1.0 / static_cast<double>(levels - 1);
}

double LevelSet::value(int index) const {
  if (index < 0 || index >= levels_) throw PreconditionError("level index out of range");
  // Pin the top level to exactly 1 so the L=2 case matches binary images bit for bit.
  return index == levels_ - 1 ? 1.0 : index * step_;
}

std::vector<TwoPoint> cast_probabilities(const Plane& v, const LevelSet& levels) {
  std::vector<TwoPoint> out(v.size());
  const int top = levels.levels() - 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) {
      throw PreconditionError("value outside [0,1] at pixel " + std::to_string(i) + ": " + std::to_string(v[i]));
    }
    // Cell [lo, lo+1) containing v; the last cell is closed so v = 1 gets {top-1, top}.
    // Lattice points keep a two-level support with one side at probability zero,
    // which makes the signal there the one-sided difference, as in the binary case.
    const double t = v[i] * top;
    const int lo = std::min(static_cast<int>(std::floor(t)), top - 1);
    out[i] = {lo, lo + 1, t - lo};
  }
  return out;
}

MultitoneImage sample_multitone(const std::vector<TwoPoint>& dist, const LevelSet& levels, int width, int height,
                                Rng& rng) {
  Plane out(width, height);
  if (dist.size() != out.size()) throw ShapeError("distribution map does not match image size");
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double u = rng.uniform();
    out[i] = levels.value(u < dist[i].p_upper ? dist[i].upper : dist[i].lower);
  }
  return MultitoneImage(std::move(out), levels.levels());
}

Plane le_signal_multitone(const std::vector<TwoPoint>& dist, const LevelSet& levels, int width, int height,
                          const metrics::RewardModel& reward) {
  Plane g(width, height);
  if (dist.size() != g.size() || dist.size() != reward.size()) {
    throw ShapeError("reward model does not match the distribution map");
  }
  for (std::size_t a = 0; a < dist.size(); ++a) {
    const auto& d = dist[a];
    const double up = levels.value(d.upper);
    const double lo = levels.value(d.lower);
    const double current = reward.value(a);
    if (current != up && current != lo) throw PreconditionError("reward model is inconsistent with the sample");
    const double diff = current == up ? -reward.delta(a, lo) : reward.delta(a, up);
    g[a] = -diff / levels.step();
  }
  return g;
}

namespace {

std::vector<rl::TwoChoice> choices(const Plane& v, const LevelSet& levels) {
  const auto dist = cast_probabilities(v, levels);
  std::vector<rl::TwoChoice> px(dist.size());
  for (std::size_t a = 0; a < dist.size(); ++a) {
    const auto& d = dist[a];
    px[a] = {levels.value(d.lower), levels.value(d.upper), d.p_upper, 1.0 / levels.step()};
  }
  return px;
}

}  // namespace

Plane exact_gradient_multitone(const Plane& v, const LevelSet& levels, const rl::RewardFn& reward) {
  Plane grad;
  rl::enumerate_two_point(v.width(), v.height(), choices(v, levels), reward, &grad);
  return grad;
}

double exact_expectation_multitone(const Plane& v, const LevelSet& levels, const rl::RewardFn& reward) {
  return rl::enumerate_two_point(v.width(), v.height(), choices(v, levels), reward, nullptr);
}

MultitoneImage round_to_levels(const Plane& v, const LevelSet& levels) {
  Plane out(v.width(), v.height());
  const int top = levels.levels() - 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int idx = std::clamp(static_cast<int>(std::floor(v[i] * top + 0.5)), 0, top);
    out[i] = levels.value(idx);
  }
  return MultitoneImage(std::move(out), levels.levels());
}

MultitoneImage infer_multitone(const nn::PolicyNetwork& net, const ContoneImage& c, const LevelSet& levels,
                               Rng& rng) {
  return round_to_levels(rl::infer_probabilities(net, c, rng), levels);
}

}  // namespace htlab::multitone
