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
#include <cstdint>
#include <span>
#include <vector>

namespace htlab {

/// Row-major 2D grid of doubles. The untyped carrier behind every image kind
/// and every intermediate map (filtered images, error maps, spectra).
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);
  Plane(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  double mean() const;

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Throws ShapeError naming `what` if the planes differ in shape.
void require_same_shape(const Plane& a, const Plane& b, const char* what);

/// Continuous-tone image, tones in [0,1] with 1 = white.
class ContoneImage {
 public:
  ContoneImage() = default;
  explicit ContoneImage(Plane plane);

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  std::size_t size() const noexcept { return plane_.size(); }
  double operator()(int x, int y) const { return plane_(x, y); }
  const Plane& plane() const noexcept { return plane_; }

  friend bool operator==(const ContoneImage&, const ContoneImage&) = default;

 private:
  Plane plane_;
};

/// Binary image with pixels exactly 0 (black) or 1 (white).
class HalftoneImage {
 public:
  HalftoneImage() = default;
  explicit HalftoneImage(Plane plane);

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  std::size_t size() const noexcept { return plane_.size(); }
  double operator()(int x, int y) const { return plane_(x, y); }
  const Plane& plane() const noexcept { return plane_; }

  /// Packed rows, MSB first, each row padded to a whole byte. Bit set = white.
  std::vector<std::uint8_t> packed() const;
  static HalftoneImage from_packed(int width, int height, std::span<const std::uint8_t> bits);

  friend bool operator==(const HalftoneImage&, const HalftoneImage&) = default;

 private:
  Plane plane_;
};

/// Multi-level image; every pixel lies on the lattice {0, 1/(L-1), ..., 1}.
class MultitoneImage {
 public:
  MultitoneImage() = default;
  MultitoneImage(Plane plane, int levels);

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  std::size_t size() const noexcept { return plane_.size(); }
  int levels() const noexcept { return levels_; }
  double operator()(int x, int y) const { return plane_(x, y); }
  const Plane& plane() const noexcept { return plane_; }

  /// Level index of pixel i, in [0, levels).
  int level_index(std::size_t i) const;

  friend bool operator==(const MultitoneImage&, const MultitoneImage&) = default;

 private:
  Plane plane_;
  int levels_ = 2;
};

/// i.i.d. standard-normal map paired with a contone as the policy's second input channel.
class NoiseMap {
 public:
  NoiseMap() = default;
  explicit NoiseMap(Plane plane) : plane_(std::move(plane)) {}

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  const Plane& plane() const noexcept { return plane_; }

 private:
  Plane plane_;
};

class Rng;

ContoneImage constant_image(double gray, int width, int height);
NoiseMap gaussian_noise_map(Rng& rng, int width, int height);
ContoneImage random_crop(Rng& rng, const ContoneImage& image, int size);
ContoneImage crop(const ContoneImage& image, int x0, int y0, int width, int height);

}  // namespace htlab
