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

#include "htlab/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace htlab::fft {

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

namespace {

std::vector<Complex> twiddles(std::size_t n, bool inverse) {
  std::vector<Complex> t(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    t[k] = {std::cos(angle), std::sin(angle)};
  }
  return t;
}

void radix2(std::span<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto tw = twiddles(n, inverse);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * tw[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

void direct(std::span<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  const auto tw = twiddles(n, inverse);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += a[j] * tw[(k * j) % n];
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), a.begin());
}

}  // namespace

void transform(std::span<Complex> data, bool inverse) {
  if (data.size() <= 1) return;
  if (is_power_of_two(static_cast<int>(data.size()))) {
    radix2(data, inverse);
  } else {
    direct(data, inverse);
  }
}

std::vector<Complex> transform2d(std::vector<Complex> data, int width, int height, bool inverse) {
  for (int y = 0; y < height; ++y) transform(std::span(data).subspan(static_cast<std::size_t>(y) * width, width), inverse);
  std::vector<Complex> column(height);
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) column[y] = data[static_cast<std::size_t>(y) * width + x];
    transform(column, inverse);
    for (int y = 0; y < height; ++y) data[static_cast<std::size_t>(y) * width + x] = column[y];
  }
  return data;
}

std::vector<Complex> dft2(const Plane& image) {
  std::vector<Complex> data(image.values().begin(), image.values().end());
  return transform2d(std::move(data), image.width(), image.height());
}

}  // namespace htlab::fft
