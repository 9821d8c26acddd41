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

#include "htlab/spectral.hpp"

#include <cmath>
#include <map>

#include "htlab/error.hpp"
#include "htlab/fft.hpp"

namespace htlab::spectral {

int signed_frequency(int k, int n) noexcept { return k < (n + 1) / 2 ? k : k - n; }

Periodogram periodogram(const Plane& x) {
  const auto spectrum = fft::dft2(x);
  Plane p(x.width(), x.height());
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(spectrum[i]) * inv_n;
  return Periodogram(std::move(p));
}

RingPartition::RingPartition(int width, int height) : width_(width), height_(height) {
  if (width < 2 || height < 2) throw PreconditionError("ring partition needs both dimensions >= 2");
  owner_.assign(static_cast<std::size_t>(width) * height, -1);
  std::map<int, std::vector<std::size_t>> by_radius;
  for (int ky = 0; ky < height; ++ky) {
    const int fy = signed_frequency(ky, height);
    for (int kx = 0; kx < width; ++kx) {
      if (kx == 0 && ky == 0) continue;
      const int fx = signed_frequency(kx, width);
      const int radius = static_cast<int>(std::lround(std::sqrt(static_cast<double>(fx * fx + fy * fy))));
      by_radius[radius].push_back(static_cast<std::size_t>(ky) * width + kx);
    }
  }
  for (auto& [radius, bins] : by_radius) {
    for (auto b : bins) owner_[b] = static_cast<int>(rings_.size());
    rings_.push_back({radius, std::move(bins)});
  }
}

RingPartition ring_partition(int width, int height) { return RingPartition(width, height); }

namespace {

void require_match(const Plane& p, const RingPartition& rings) {
  if (p.width() != rings.width() || p.height() != rings.height()) {
    throw ShapeError("periodogram and ring partition shapes differ");
  }
}

double ring_mean(const Plane& p, const Ring& ring) {
  double sum = 0.0;
  for (auto b : ring.bins) sum += p[b];
  return sum / static_cast<double>(ring.bins.size());
}

}  // namespace

RapsdCurve rapsd(const Periodogram& p, const RingPartition& rings) {
  require_match(p.values(), rings);
  RapsdCurve curve;
  curve.dc = p.dc();
  curve.points.reserve(rings.rings().size());
  for (const auto& ring : rings.rings()) curve.points.push_back({ring.radius, ring.bins.size(), ring_mean(p.values(), ring)});
  return curve;
}

std::optional<double> AnisotropyPoint::decibels() const {
  if (!value || *value <= 0.0) return std::nullopt;
  return 10.0 * std::log10(*value);
}

AnisotropyCurve anisotropy(const Periodogram& p, const RingPartition& rings) {
  require_match(p.values(), rings);
  AnisotropyCurve curve;
  curve.reserve(rings.rings().size());
  for (const auto& ring : rings.rings()) {
    AnisotropyPoint pt{ring.radius, ring.bins.size(), std::nullopt};
    if (ring.bins.size() >= 2) {
      const double mean = ring_mean(p.values(), ring);
      if (mean > 0.0) {
        double acc = 0.0;
        for (auto b : ring.bins) {
          const double d = p.values()[b] - mean;
          acc += d * d;
        }
        pt.value = acc / (mean * mean) / static_cast<double>(ring.bins.size() - 1);
      }
    }
    curve.push_back(pt);
  }
  return curve;
}

std::optional<double> mean_anisotropy(const AnisotropyCurve& curve) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& pt : curve) {
    if (pt.value) {
      sum += *pt.value;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double anisotropy_loss(const Plane& probabilities, const RingPartition& rings) {
  const auto p = periodogram(probabilities);
  require_match(p.values(), rings);
  double loss = 0.0;
  for (const auto& ring : rings.rings()) {
    if (ring.bins.size() < 2) continue;
    const double mean = ring_mean(p.values(), ring);
    for (auto b : ring.bins) {
      const double d = p.values()[b] - mean;
      loss += d * d;
    }
  }
  return loss;
}

double anisotropy_loss(const Plane& probabilities) {
  return anisotropy_loss(probabilities, RingPartition(probabilities.width(), probabilities.height()));
}

Plane anisotropy_loss_backward(const Plane& probabilities, const RingPartition& rings) {
  const int w = probabilities.width(), h = probabilities.height();
  const double n = static_cast<double>(probabilities.size());
  auto spectrum = fft::dft2(probabilities);
  if (w != rings.width() || h != rings.height()) throw ShapeError("probability map and ring partition shapes differ");

  // dL/dP(f) = 2 (P(f) - ring mean); the ring-mean term cancels because
  // deviations within a ring sum to zero.
  std::vector<double> g(spectrum.size(), 0.0);
  for (const auto& ring : rings.rings()) {
    if (ring.bins.size() < 2) continue;
    double mean = 0.0;
    for (auto b : ring.bins) mean += std::norm(spectrum[b]) / n;
    mean /= static_cast<double>(ring.bins.size());
    for (auto b : ring.bins) g[b] = 2.0 * (std::norm(spectrum[b]) / n - mean);
  }
  // P(f) = |X(f)|^2 / N  =>  dL/dx = (2/N) Re(sum_f G(f) X(f) e^{+2 pi i f x})
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= g[i];
  const auto back = fft::transform2d(std::move(spectrum), w, h, /*inverse=*/true);
  Plane grad(w, h);
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = 2.0 * back[i].real() / n;
  return grad;
}

Plane anisotropy_loss_backward(const Plane& probabilities) {
  return anisotropy_loss_backward(probabilities, RingPartition(probabilities.width(), probabilities.height()));
}

}  // namespace htlab::spectral
