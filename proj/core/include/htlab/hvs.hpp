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
#include <string>
#include <string_view>
#include <vector>

#include "htlab/image.hpp"

namespace htlab::hvs {

enum class Model { nasanen, gaussian };

/// Constants of Nasanen's exponential contrast-sensitivity model
/// H(rho) = a * L^b * exp(-rho / (c * ln(L) + d)), rho in cycles/degree,
/// with the values tabulated by Kim and Allebach (2002). `a` and `b` only scale
/// the response and drop out after unit-DC normalization.
struct NasanenParams {
  double a = 131.6;
  double b = 0.3188;
  double c = 0.525;
  double d = 3.91;
  double luminance = 11.0;  // cd/m^2
  /// Side of the DFT lattice the frequency response is sampled on.
  int dense_grid = 256;
};

struct Config {
  Model model = Model::nasanen;
  int size = 11;
  /// Scale S = resolution x viewing distance (dpi * inches). Maps cycles/pixel
  /// to cycles/degree as rho = f * S * pi / 180.
  double scale = 2000.0;
  double sigma = 2.0;
  NasanenParams nasanen;

  void validate() const;
};

/// Odd-sized square filter with unit DC gain.
class Kernel {
 public:
  Kernel() = default;
  Kernel(int size, std::vector<double> weights);

  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  /// Weight at row i, column j, both in [0, size).
  double operator()(int i, int j) const { return weights_[static_cast<std::size_t>(i) * size_ + j]; }
  /// Weight at signed offset (dx, dy) from the centre.
  double at_offset(int dx, int dy) const { return (*this)(dy + radius(), dx + radius()); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double sum() const;

 private:
  int size_ = 0;
  std::vector<double> weights_;
};

Kernel build_gaussian_kernel(int size, double sigma);
Kernel build_nasanen_kernel(int size, double scale, const NasanenParams& params = {});
Kernel build_kernel(const Config& config);

/// Spatial Nasanen point-spread function on the full dense lattice, centred at
/// (M/2, M/2), before truncation. Unnormalized.
Plane nasanen_psf_dense(double scale, const NasanenParams& params = {});

enum class Padding { zero, valid_mask };

struct Filtered {
  Plane values;
  /// 1 where the whole kernel window fits inside the image. Empty for Padding::zero.
  std::vector<std::uint8_t> valid;
  std::size_t valid_count = 0;
};

/// Same-size 2D convolution with zero padding. With Padding::valid_mask the
/// output is identical but also carries the mask of fully-covered pixels.
Filtered convolve_same(const Plane& image, const Kernel& kernel, Padding padding = Padding::zero);
Plane convolve(const Plane& image, const Kernel& kernel);

/// Pixels whose size x size window lies fully inside a width x height image.
std::vector<std::uint8_t> valid_mask(int width, int height, int kernel_size);

std::string kernel_to_csv(const Kernel& kernel);
Kernel kernel_from_csv(std::string_view text);

std::string_view model_name(Model model);
Model parse_model(std::string_view name);

}  // namespace htlab::hvs
