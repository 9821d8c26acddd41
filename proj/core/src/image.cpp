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

#include "htlab/image.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "htlab/error.hpp"
#include "htlab/rng.hpp"

namespace htlab {

namespace {

void require_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw PreconditionError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                            std::to_string(height));
  }
}

}  // namespace

Plane::Plane(int width, int height, double fill) : width_(width), height_(height) {
  require_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Plane::Plane(int width, int height, std::vector<double> values)
    : width_(width), height_(height), data_(std::move(values)) {
  require_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("plane value count " + std::to_string(data_.size()) + " does not match " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
}

double Plane::mean() const {
  if (data_.empty()) return 0.0;
  return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

void require_same_shape(const Plane& a, const Plane& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()));
  }
}

ContoneImage::ContoneImage(Plane plane) : plane_(std::move(plane)) {
  for (double v : plane_.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("contone tone outside [0,1]: " + std::to_string(v));
  }
}

HalftoneImage::HalftoneImage(Plane plane) : plane_(std::move(plane)) {
  for (double v : plane_.values()) {
    if (v != 0.0 && v != 1.0) throw PreconditionError("halftone pixel not in {0,1}: " + std::to_string(v));
  }
}

std::vector<std::uint8_t> HalftoneImage::packed() const {
  const std::size_t row_bytes = (static_cast<std::size_t>(width()) + 7) / 8;
  std::vector<std::uint8_t> out(row_bytes * height(), 0);
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) {
      if (plane_(x, y) == 1.0) out[y * row_bytes + x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
    }
  }
  return out;
}

HalftoneImage HalftoneImage::from_packed(int width, int height, std::span<const std::uint8_t> bits) {
  const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
  if (bits.size() < row_bytes * height) throw ShapeError("packed halftone buffer too short");
  Plane p(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      p(x, y) = (bits[y * row_bytes + x / 8] & (0x80u >> (x % 8))) ? 1.0 : 0.0;
    }
  }
  return HalftoneImage(std::move(p));
}

MultitoneImage::MultitoneImage(Plane plane, int levels) : plane_(std::move(plane)), levels_(levels) {
  if (levels < 2) throw PreconditionError("multitone needs at least 2 levels");
  for (std::size_t i = 0; i < plane_.size(); ++i) {
    const double t = plane_[i] * (levels_ - 1);
    if (!(plane_[i] >= 0.0 && plane_[i] <= 1.0) || std::abs(t - std::round(t)) > 1e-9) {
      throw PreconditionError("multitone pixel off the level lattice: " + std::to_string(plane_[i]));
    }
  }
}

int MultitoneImage::level_index(std::size_t i) const {
  return static_cast<int>(std::lround(plane_[i] * (levels_ - 1)));
}

ContoneImage constant_image(double gray, int width, int height) {
  if (!(gray >= 0.0 && gray <= 1.0)) throw PreconditionError("gray level outside [0,1]: " + std::to_string(gray));
  return ContoneImage(Plane(width, height, gray));
}

NoiseMap gaussian_noise_map(Rng& rng, int width, int height) {
  Plane p(width, height);
  auto v = p.values();
  std::size_t i = 0;
  for (; i + 1 < v.size(); i += 2) {
    auto [a, b] = rng.normal_pair();
    v[i] = a;
    v[i + 1] = b;
  }
  if (i < v.size()) v[i] = rng.normal_pair().first;
  return NoiseMap(std::move(p));
}

ContoneImage crop(const ContoneImage& image, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width <= 0 || height <= 0 || x0 + width > image.width() ||
      y0 + height > image.height()) {
    throw PreconditionError("crop window outside image");
  }
  Plane p(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) p(x, y) = image(x0 + x, y0 + y);
  }
  return ContoneImage(std::move(p));
}

ContoneImage random_crop(Rng& rng, const ContoneImage& image, int size) {
  if (size <= 0 || size > image.width() || size > image.height()) {
    throw PreconditionError("crop size " + std::to_string(size) + " exceeds image " +
                            std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  const auto x0 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(image.width() - size + 1)));
  const auto y0 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(image.height() - size + 1)));
  return crop(image, x0, y0, size, size);
}

}  // namespace htlab
