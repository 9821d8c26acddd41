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
#include <vector>

#include "htlab/hvs.hpp"
#include "htlab/image.hpp"

namespace htlab::metrics {

/// Which pixels a scalar metric averages over. `full` uses every pixel of the
/// zero-padded maps (training rewards); `valid` keeps only pixels whose window
/// lies entirely inside the image (evaluation, no padding).
enum class Region { full, valid };

struct Config {
  double w_s = 0.06;
  int ssim_window = 11;
  double ssim_sigma = 1.5;
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
  /// Contrast-map normalizer; maps the weighted std of [0,1] data onto [0,1].
  double k = 2.0;
  hvs::Config hvs;

  void validate() const;
};

/// Mean of `map` over `region`, where validity is judged for a window of `window` pixels.
double region_mean(const Plane& map, int window, Region region);

struct MseResult {
  double mse = 0.0;
  Plane error_map;  // (HVS(h) - HVS(c))^2 per pixel
};

MseResult hvs_mse(const Plane& h, const Plane& c, const hvs::Kernel& kernel, Region region);

/// Peak signal-to-noise ratio for unit dynamic range. +inf when mse == 0.
double psnr(double mse);

/// Raw weighted window moments at one pixel: E[x], E[y], E[x^2], E[y^2], E[xy].
struct LocalMoments {
  double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
};

struct SsimTerms {
  double luminance = 1, contrast = 1, structure = 1;
  double ssim() const noexcept { return luminance * contrast * structure; }
};

SsimTerms ssim_terms(const LocalMoments& m, double c1, double c2) noexcept;

struct SsimMaps {
  Plane luminance;
  Plane contrast;
  Plane structure;
  Plane ssim;
};

SsimMaps ssim_maps(const Plane& x, const Plane& y, const Config& config);
double ssim(const Plane& x, const Plane& y, const Config& config, Region region);

/// sigma_a = k * sqrt(sum_i w_i (c_i - mu_a)^2) over the Gaussian SSIM window.
Plane contrast_map(const Plane& c, const Config& config);

struct CssimResult {
  double value = 1.0;
  Plane map;
};

/// Contrast-weighted SSIM: sigma_c * SSIM + (1 - sigma_c), averaged over `region`.
CssimResult cssim(const Plane& h, const Plane& c, const Config& config, Region region);

/// A scalar reward over an action image together with the exact change in
/// reward when one pixel is replaced. Estimators only talk to this interface.
class RewardModel {
 public:
  virtual ~RewardModel() = default;
  virtual std::size_t size() const = 0;
  virtual double reward() const = 0;
  /// Current action value at pixel a.
  virtual double value(std::size_t a) const = 0;
  /// R(h with h_a = v) - R(h).
  virtual double delta(std::size_t a, double v) const = 0;
};

/// Training reward R = -MSE(HVS(h), HVS(c)) + w_s * CSSIM(h, c) on zero-padded
/// full maps, with every intermediate map kept so that replacing one pixel
/// costs O(hvs_size^2 + ssim_window^2) instead of a full recomputation.
class RewardContext final : public RewardModel {
 public:
  RewardContext(const Plane& h, const Plane& c, const Config& config);
  RewardContext(const Plane& h, const Plane& c, const Config& config, hvs::Kernel hvs_kernel);

  std::size_t size() const override { return h_.size(); }
  double reward() const override { return reward_; }
  double value(std::size_t a) const override { return h_[a]; }
  double delta(std::size_t a, double v) const override;

  /// R after flipping binary pixel a, minus R now.
  double toggle_delta(std::size_t a) const { return delta(a, 1.0 - h_[a]); }

  /// Replaces pixel a and updates every affected map in place.
  void apply(std::size_t a, double v);

  const Config& config() const noexcept { return config_; }
  const hvs::Kernel& hvs_kernel() const noexcept { return hvs_kernel_; }
  const Plane& contone() const noexcept { return c_; }
  const Plane& halftone() const noexcept { return h_; }
  const Plane& filtered_contone() const noexcept { return hvs_c_; }
  const Plane& filtered_halftone() const noexcept { return hvs_h_; }
  const Plane& error_map() const noexcept { return error_; }
  const Plane& luminance_map() const noexcept { return lum_; }
  const Plane& contrast_term_map() const noexcept { return con_; }
  const Plane& structure_map() const noexcept { return str_; }
  const Plane& ssim_map() const noexcept { return ssim_; }
  const Plane& sigma_map() const noexcept { return sigma_; }
  const Plane& local_mean_map() const noexcept { return mu_c_; }
  const Plane& cssim_map() const noexcept { return cssim_; }
  const Plane& reward_map() const noexcept { return reward_map_; }

  double mse() const;
  double cssim_mean() const;

  /// Number of delta() calls since construction (instrumentation).
  std::size_t delta_evaluations() const noexcept { return delta_calls_; }

 private:
  void build();
  void refresh_scalar();

  Config config_;
  hvs::Kernel hvs_kernel_;
  hvs::Kernel window_;
  Plane c_, h_;
  Plane hvs_c_, hvs_h_, error_;
  // window moments of h (mx, E[x^2], E[xc]); those of c are fixed
  Plane mx_, sxx_, sxy_;
  Plane mu_c_, syy_;
  Plane lum_, con_, str_, ssim_;
  Plane sigma_, cssim_, reward_map_;
  double reward_ = 0.0;
  mutable std::size_t delta_calls_ = 0;
};

/// Builds the full reward context from scratch.
RewardContext reward(const Plane& h, const Plane& c, const Config& config);

}  // namespace htlab::metrics
