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

#include "htlab/hvs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "htlab/error.hpp"

namespace htlab::hvs {

namespace {

void require_odd(int size) {
  if (size <= 0 || size % 2 == 0) throw PreconditionError("kernel size must be odd and positive, got " + std::to_string(size));
}

Kernel normalized(int size, std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw PreconditionError("kernel has non-positive total weight");
  for (auto& v : w) v /= total;
  return Kernel(size, std::move(w));
}

}  // namespace

void Config::validate() const {
  require_odd(size);
  if (!(scale > 0.0)) throw PreconditionError("HVS scale S must be positive");
  if (!(sigma > 0.0)) throw PreconditionError("HVS sigma must be positive");
  if (nasanen.dense_grid < size) throw PreconditionError("Nasanen dense grid smaller than kernel");
}

Kernel::Kernel(int size, std::vector<double> weights) : size_(size), weights_(std::move(weights)) {
  require_odd(size);
  if (weights_.size() != static_cast<std::size_t>(size) * size) throw ShapeError("kernel weight count mismatch");
}

double Kernel::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

Kernel build_gaussian_kernel(int size, double sigma) {
  require_odd(size);
  if (!(sigma > 0.0)) throw PreconditionError("Gaussian sigma must be positive");
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double dy = i - r, dx = j - r;
      w[static_cast<std::size_t>(i) * size + j] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  return normalized(size, std::move(w));
}

Plane nasanen_psf_dense(double scale, const NasanenParams& params) {
  if (!(scale > 0.0)) throw PreconditionError("HVS scale S must be positive");
  const int m = params.dense_grid;
  if (m < 2) throw PreconditionError("dense grid too small");
  const double bandwidth = params.c * std::log(params.luminance) + params.d;  // cycles/degree
  const double gain = params.a * std::pow(params.luminance, params.b);
  const double cpd_per_cpp = scale * std::numbers::pi / 180.0;

  // H is even in each axis, so the inverse DFT reduces to a cosine-cosine sum.
  std::vector<double> cosines(static_cast<std::size_t>(m) * m);
  for (int x = 0; x < m; ++x) {
    for (int k = 0; k < m; ++k) {
      const long phase = (static_cast<long>(k) * x) % m;
      cosines[static_cast<std::size_t>(x) * m + k] = std::cos(2.0 * std::numbers::pi * phase / m);
    }
  }
  std::vector<double> response(static_cast<std::size_t>(m) * m);
  for (int ky = 0; ky < m; ++ky) {
    const double fy = static_cast<double>(ky < (m + 1) / 2 ? ky : ky - m) / m;
    for (int kx = 0; kx < m; ++kx) {
      const double fx = static_cast<double>(kx < (m + 1) / 2 ? kx : kx - m) / m;
      const double rho = std::sqrt(fx * fx + fy * fy) * cpd_per_cpp;
      response[static_cast<std::size_t>(ky) * m + kx] = gain * std::exp(-rho / bandwidth);
    }
  }
  // tmp[ky][x] = sum_kx H[ky][kx] cos(2 pi kx x / m)
  std::vector<double> tmp(static_cast<std::size_t>(m) * m, 0.0);
  for (int ky = 0; ky < m; ++ky) {
    const double* h = &response[static_cast<std::size_t>(ky) * m];
    for (int x = 0; x < m; ++x) {
      const double* cs = &cosines[static_cast<std::size_t>(x) * m];
      double acc = 0.0;
      for (int kx = 0; kx < m; ++kx) acc += h[kx] * cs[kx];
      tmp[static_cast<std::size_t>(ky) * m + x] = acc;
    }
  }
  Plane out(m, m);
  const double norm = 1.0 / (static_cast<double>(m) * m);
  for (int y = 0; y < m; ++y) {
    const double* cs = &cosines[static_cast<std::size_t>(y) * m];
    for (int x = 0; x < m; ++x) {
      double acc = 0.0;
      for (int ky = 0; ky < m; ++ky) acc += tmp[static_cast<std::size_t>(ky) * m + x] * cs[ky];
      out((x + m / 2) % m, (y + m / 2) % m) = acc * norm;
    }
  }
  return out;
}

Kernel build_nasanen_kernel(int size, double scale, const NasanenParams& params) {
  require_odd(size);
  if (params.dense_grid < size) throw PreconditionError("Nasanen dense grid smaller than kernel");
  const Plane dense = nasanen_psf_dense(scale, params);
  const int m = params.dense_grid;
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) w[static_cast<std::size_t>(i) * size + j] = dense(m / 2 + j - r, m / 2 + i - r);
  }
  return normalized(size, std::move(w));
}

Kernel build_kernel(const Config& config) {
  config.validate();
  return config.model == Model::gaussian ? build_gaussian_kernel(config.size, config.sigma)
                                         : build_nasanen_kernel(config.size, config.scale, config.nasanen);
}

std::vector<std::uint8_t> valid_mask(int width, int height, int kernel_size) {
  const int r = kernel_size / 2;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * height, 0);
  for (int y = r; y < height - r; ++y) {
    for (int x = r; x < width - r; ++x) mask[static_cast<std::size_t>(y) * width + x] = 1;
  }
  return mask;
}

Plane convolve(const Plane& image, const Kernel& kernel) {
  const int w = image.width(), h = image.height(), r = kernel.radius();
  Plane out(w, h, 0.0);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double k = kernel.at_offset(dx, dy);
      // out(x, y) += k * in(x - dx, y - dy) for in-bounds sources
      const int y0 = std::max(0, dy), y1 = std::min(h, h + dy);
      const int x0 = std::max(0, dx), x1 = std::min(w, w + dx);
      for (int y = y0; y < y1; ++y) {
        double* o = &out(0, y);
        const double* s = image.values().data() + static_cast<std::size_t>(y - dy) * w;
        for (int x = x0; x < x1; ++x) o[x] += k * s[x - dx];
      }
    }
  }
  return out;
}

Filtered convolve_same(const Plane& image, const Kernel& kernel, Padding padding) {
  Filtered f{convolve(image, kernel), {}, 0};
  if (padding == Padding::valid_mask) {
    f.valid = valid_mask(image.width(), image.height(), kernel.size());
    f.valid_count = static_cast<std::size_t>(std::count(f.valid.begin(), f.valid.end(), std::uint8_t{1}));
  }
  return f;
}

std::string kernel_to_csv(const Kernel& kernel) {
  std::string out;
  char buf[32];
  for (int i = 0; i < kernel.size(); ++i) {
    for (int j = 0; j < kernel.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", kernel(i, j));
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Kernel kernel_from_csv(std::string_view text) {
  std::vector<double> values;
  int rows = 0;
  std::size_t cols = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t count = 0;
    while (true) {
      const auto comma = line.find(',');
      std::string field(line.substr(0, comma));
      values.push_back(std::stod(field));
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (rows == 0) cols = count;
    if (count != cols) throw FormatError("kernel CSV rows differ in length");
    ++rows;
  }
  if (rows == 0 || static_cast<std::size_t>(rows) != cols) throw FormatError("kernel CSV must be square");
  return Kernel(rows, std::move(values));
}

std::string_view model_name(Model model) { return model == Model::gaussian ? "gaussian" : "nasanen"; }

Model parse_model(std::string_view name) {
  if (name == "gaussian") return Model::gaussian;
  if (name == "nasanen") return Model::nasanen;
  throw PreconditionError("unknown HVS model '" + std::string(name) + "'");
}

}  // namespace htlab::hvs
