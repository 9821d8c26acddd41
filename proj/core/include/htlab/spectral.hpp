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

#include <cstddef>
#include <optional>
#include <vector>

#include "htlab/image.hpp"

namespace htlab::spectral {

/// P(f) = |DFT(x)|^2 / N on the unshifted DFT lattice.
class Periodogram {
 public:
  Periodogram() = default;
  explicit Periodogram(Plane values) : values_(std::move(values)) {}

  int width() const noexcept { return values_.width(); }
  int height() const noexcept { return values_.height(); }
  double operator()(int fx, int fy) const { return values_(fx, fy); }
  double dc() const { return values_[0]; }
  const Plane& values() const noexcept { return values_; }

 private:
  Plane values_;
};

Periodogram periodogram(const Plane& x);

/// Annular rings of width 1 over the signed-frequency lattice, DC excluded.
/// Ring index = round(sqrt(fx^2 + fy^2)); empty radii are skipped.
struct Ring {
  int radius = 0;
  std::vector<std::size_t> bins;  // row-major lattice indices
};

class RingPartition {
 public:
  RingPartition() = default;
  RingPartition(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<Ring>& rings() const noexcept { return rings_; }
  /// Ring position in rings() for a lattice bin, or -1 for DC.
  int ring_of(std::size_t bin) const { return owner_[bin]; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Ring> rings_;
  std::vector<int> owner_;
};

RingPartition ring_partition(int width, int height);

/// Signed frequency index of DFT bin k on an n-point axis, in [-n/2, n/2).
int signed_frequency(int k, int n) noexcept;

struct RapsdPoint {
  int radius = 0;
  std::size_t count = 0;
  double power = 0.0;
};

struct RapsdCurve {
  double dc = 0.0;
  std::vector<RapsdPoint> points;
};

RapsdCurve rapsd(const Periodogram& p, const RingPartition& rings);

struct AnisotropyPoint {
  int radius = 0;
  std::size_t count = 0;
  /// Unset when the ring has fewer than two samples or zero mean power.
  std::optional<double> value;
  std::optional<double> decibels() const;
};

using AnisotropyCurve = std::vector<AnisotropyPoint>;

AnisotropyCurve anisotropy(const Periodogram& p, const RingPartition& rings);

/// Mean of the defined anisotropy values, or nullopt if none.
std::optional<double> mean_anisotropy(const AnisotropyCurve& curve);

/// Sum over rings with >= 2 samples of sum_f (P(f) - ring mean)^2, computed on
/// the periodogram of `probabilities` (the differentiable stand-in for h).
double anisotropy_loss(const Plane& probabilities);
double anisotropy_loss(const Plane& probabilities, const RingPartition& rings);

/// Exact gradient of anisotropy_loss with respect to every input pixel.
Plane anisotropy_loss_backward(const Plane& probabilities);
Plane anisotropy_loss_backward(const Plane& probabilities, const RingPartition& rings);

}  // namespace htlab::spectral
