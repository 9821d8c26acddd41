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

#include "htlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "htlab/error.hpp"

namespace htlab::metrics {

namespace {

Plane square(const Plane& p) {
  Plane out = p;
  for (auto& v : out.values()) v *= v;
  return out;
}

Plane product(const Plane& a, const Plane& b) {
  Plane out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

hvs::Kernel ssim_window(const Config& config) {
  return hvs::build_gaussian_kernel(config.ssim_window, config.ssim_sigma);
}

}  // namespace

void Config::validate() const {
  if (!(w_s >= 0.0)) throw PreconditionError("w_s must be non-negative");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw PreconditionError("SSIM stabilizers must be positive");
  if (ssim_window <= 0 || ssim_window % 2 == 0) throw PreconditionError("SSIM window must be odd");
  if (!(ssim_sigma > 0.0)) throw PreconditionError("SSIM sigma must be positive");
  if (!(k > 0.0)) throw PreconditionError("contrast normalizer k must be positive");
  hvs.validate();
}

double region_mean(const Plane& map, int window, Region region) {
  if (region == Region::full) return map.mean();
  const auto mask = hvs::valid_mask(map.width(), map.height(), window);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (mask[i]) {
      sum += map[i];
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

MseResult hvs_mse(const Plane& h, const Plane& c, const hvs::Kernel& kernel, Region region) {
  require_same_shape(h, c, "hvs_mse");
  const Plane fh = hvs::convolve(h, kernel);
  const Plane fc = hvs::convolve(c, kernel);
  Plane err(h.width(), h.height());
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double d = fh[i] - fc[i];
    err[i] = d * d;
  }
  const double mse = region_mean(err, kernel.size(), region);
  return {mse, std::move(err)};
}

double psnr(double mse) {
  if (mse < 0.0 || std::isnan(mse)) throw PreconditionError("psnr: mse must be non-negative");
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(mse);
}

SsimTerms ssim_terms(const LocalMoments& m, double c1, double c2) noexcept {
  const double vx = std::max(m.sxx - m.mx * m.mx, 0.0);
  const double vy = std::max(m.syy - m.my * m.my, 0.0);
  const double cov = m.sxy - m.mx * m.my;
  // sqrt(vx * vy) rather than sqrt(vx) * sqrt(vy): exact when vx == vy
  const double sd_xy = std::sqrt(vx * vy);
  const double c3 = 0.5 * c2;
  SsimTerms t;
  t.luminance = (2.0 * m.mx * m.my + c1) / (m.mx * m.mx + m.my * m.my + c1);
  t.contrast = (2.0 * sd_xy + c2) / (vx + vy + c2);
  t.structure = (cov + c3) / (sd_xy + c3);
  return t;
}

SsimMaps ssim_maps(const Plane& x, const Plane& y, const Config& config) {
  require_same_shape(x, y, "ssim_maps");
  const auto window = ssim_window(config);
  const Plane mx = hvs::convolve(x, window);
  const Plane my = hvs::convolve(y, window);
  const Plane sxx = hvs::convolve(square(x), window);
  const Plane syy = hvs::convolve(square(y), window);
  const Plane sxy = hvs::convolve(product(x, y), window);
  SsimMaps maps{Plane(x.width(), x.height()), Plane(x.width(), x.height()), Plane(x.width(), x.height()),
                Plane(x.width(), x.height())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto t = ssim_terms({mx[i], my[i], sxx[i], syy[i], sxy[i]}, config.c1, config.c2);
    maps.luminance[i] = t.luminance;
    maps.contrast[i] = t.contrast;
    maps.structure[i] = t.structure;
    maps.ssim[i] = t.ssim();
  }
  return maps;
}

double ssim(const Plane& x, const Plane& y, const Config& config, Region region) {
  return region_mean(ssim_maps(x, y, config).ssim, config.ssim_window, region);
}

Plane contrast_map(const Plane& c, const Config& config) {
  const auto window = ssim_window(config);
  const int w = c.width(), h = c.height(), r = window.radius();
  Plane sigma(w, h);
  for (int ay = 0; ay < h; ++ay) {
    for (int ax = 0; ax < w; ++ax) {
      // moments about the centre value; identical to the variance about the
      // local mean but exactly zero on flat windows
      const double centre = c(ax, ay);
      double s1 = 0.0, s2 = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int x = ax - dx, y = ay - dy;
          const double v = (x >= 0 && x < w && y >= 0 && y < h) ? c(x, y) : 0.0;
          const double d = v - centre;
          const double wt = window.at_offset(dx, dy);
          s1 += wt * d;
          s2 += wt * d * d;
        }
      }
      sigma(ax, ay) = config.k * std::sqrt(std::max(s2 - s1 * s1, 0.0));
    }
  }
  return sigma;
}

CssimResult cssim(const Plane& h, const Plane& c, const Config& config, Region region) {
  require_same_shape(h, c, "cssim");
  const Plane s = ssim_maps(h, c, config).ssim;
  const Plane sigma = contrast_map(c, config);
  Plane map(h.width(), h.height());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = sigma[i] * s[i] + (1.0 - sigma[i]);
  const double value = region_mean(map, config.ssim_window, region);
  return {value, std::move(map)};
}

RewardContext::RewardContext(const Plane& h, const Plane& c, const Config& config)
    : RewardContext(h, c, config, hvs::build_kernel(config.hvs)) {}

RewardContext::RewardContext(const Plane& h, const Plane& c, const Config& config, hvs::Kernel hvs_kernel)
    : config_(config), hvs_kernel_(std::move(hvs_kernel)), window_(ssim_window(config)), c_(c), h_(h) {
  require_same_shape(h, c, "reward");
  build();
}

void RewardContext::build() {
  hvs_c_ = hvs::convolve(c_, hvs_kernel_);
  hvs_h_ = hvs::convolve(h_, hvs_kernel_);
  error_ = Plane(h_.width(), h_.height());
  for (std::size_t i = 0; i < error_.size(); ++i) {
    const double d = hvs_h_[i] - hvs_c_[i];
    error_[i] = d * d;
  }
  mx_ = hvs::convolve(h_, window_);
  sxx_ = hvs::convolve(square(h_), window_);
  sxy_ = hvs::convolve(product(h_, c_), window_);
  mu_c_ = hvs::convolve(c_, window_);
  syy_ = hvs::convolve(square(c_), window_);
  sigma_ = contrast_map(c_, config_);

  const int w = h_.width(), ht = h_.height();
  lum_ = Plane(w, ht);
  con_ = Plane(w, ht);
  str_ = Plane(w, ht);
  ssim_ = Plane(w, ht);
  cssim_ = Plane(w, ht);
  reward_map_ = Plane(w, ht);
  for (std::size_t i = 0; i < h_.size(); ++i) {
    const auto t = ssim_terms({mx_[i], mu_c_[i], sxx_[i], syy_[i], sxy_[i]}, config_.c1, config_.c2);
    lum_[i] = t.luminance;
    con_[i] = t.contrast;
    str_[i] = t.structure;
    ssim_[i] = t.ssim();
    cssim_[i] = sigma_[i] * ssim_[i] + (1.0 - sigma_[i]);
    reward_map_[i] = -error_[i] + config_.w_s * cssim_[i];
  }
  refresh_scalar();
}

void RewardContext::refresh_scalar() { reward_ = reward_map_.mean(); }

double RewardContext::mse() const { return error_.mean(); }
double RewardContext::cssim_mean() const { return cssim_.mean(); }

double RewardContext::delta(std::size_t a, double v) const {
  if (a >= h_.size()) throw PreconditionError("pixel index " + std::to_string(a) + " out of bounds");
  ++delta_calls_;
  const double old = h_[a];
  const double d = v - old;
  if (d == 0.0) return 0.0;
  const double d2 = v * v - old * old;
  const double dc = d * c_[a];
  const int w = h_.width(), ht = h_.height();
  const int ax = static_cast<int>(a % static_cast<std::size_t>(w));
  const int ay = static_cast<int>(a / static_cast<std::size_t>(w));

  double d_error = 0.0;
  const int r = hvs_kernel_.radius();
  for (int by = std::max(0, ay - r); by <= std::min(ht - 1, ay + r); ++by) {
    for (int bx = std::max(0, ax - r); bx <= std::min(w - 1, ax + r); ++bx) {
      const double k = hvs_kernel_.at_offset(bx - ax, by - ay);
      const double diff = hvs_h_(bx, by) + k * d - hvs_c_(bx, by);
      d_error += diff * diff - error_(bx, by);
    }
  }

  double d_cssim = 0.0;
  if (config_.w_s != 0.0) {
    const int rw = window_.radius();
    for (int by = std::max(0, ay - rw); by <= std::min(ht - 1, ay + rw); ++by) {
      for (int bx = std::max(0, ax - rw); bx <= std::min(w - 1, ax + rw); ++bx) {
        const double wt = window_.at_offset(bx - ax, by - ay);
        const LocalMoments m{mx_(bx, by) + wt * d, mu_c_(bx, by), sxx_(bx, by) + wt * d2, syy_(bx, by),
                             sxy_(bx, by) + wt * dc};
        const double s = ssim_terms(m, config_.c1, config_.c2).ssim();
        const double sg = sigma_(bx, by);
        d_cssim += (sg * s + (1.0 - sg)) - cssim_(bx, by);
      }
    }
  }
  return (-d_error + config_.w_s * d_cssim) / static_cast<double>(h_.size());
}

void RewardContext::apply(std::size_t a, double v) {
  if (a >= h_.size()) throw PreconditionError("pixel index " + std::to_string(a) + " out of bounds");
  const double old = h_[a];
  const double d = v - old;
  if (d == 0.0) return;
  const double d2 = v * v - old * old;
  const double dc = d * c_[a];
  const int w = h_.width(), ht = h_.height();
  const int ax = static_cast<int>(a % static_cast<std::size_t>(w));
  const int ay = static_cast<int>(a / static_cast<std::size_t>(w));
  h_[a] = v;

  const int r = hvs_kernel_.radius();
  for (int by = std::max(0, ay - r); by <= std::min(ht - 1, ay + r); ++by) {
    for (int bx = std::max(0, ax - r); bx <= std::min(w - 1, ax + r); ++bx) {
      hvs_h_(bx, by) += hvs_kernel_.at_offset(bx - ax, by - ay) * d;
      const double diff = hvs_h_(bx, by) - hvs_c_(bx, by);
      error_(bx, by) = diff * diff;
      reward_map_(bx, by) = -error_(bx, by) + config_.w_s * cssim_(bx, by);
    }
  }
  const int rw = window_.radius();
  for (int by = std::max(0, ay - rw); by <= std::min(ht - 1, ay + rw); ++by) {
    for (int bx = std::max(0, ax - rw); bx <= std::min(w - 1, ax + rw); ++bx) {
      const double wt = window_.at_offset(bx - ax, by - ay);
      mx_(bx, by) += wt * d;
      sxx_(bx, by) += wt * d2;
      sxy_(bx, by) += wt * dc;
      const auto t = ssim_terms({mx_(bx, by), mu_c_(bx, by), sxx_(bx, by), syy_(bx, by), sxy_(bx, by)},
                                config_.c1, config_.c2);
      lum_(bx, by) = t.luminance;
      con_(bx, by) = t.contrast;
      str_(bx, by) = t.structure;
      ssim_(bx, by) = t.ssim();
      const double sg = sigma_(bx, by);
      cssim_(bx, by) = sg * ssim_(bx, by) + (1.0 - sg);
      reward_map_(bx, by) = -error_(bx, by) + config_.w_s * cssim_(bx, by);
    }
  }
  refresh_scalar();
}

RewardContext reward(const Plane& h, const Plane& c, const Config& config) { return RewardContext(h, c, config); }

}  // namespace htlab::metrics
