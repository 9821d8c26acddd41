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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <map>
#include <set>

#include "htlab/classic.hpp"
#include "htlab/rng.hpp"
#include "htlab/spectral.hpp"

using namespace htlab;
using namespace htlab::spectral;

namespace {

Plane random_plane(Rng& rng, int w, int h) {
  Plane p(w, h);
  for (auto& v : p.values()) v = rng.uniform();
  return p;
}

Plane naive_periodogram(const Plane& x) {
  const int w = x.width(), h = x.height();
  Plane out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      std::complex<double> acc = 0.0;
      for (int y = 0; y < h; ++y) {
        for (int xx = 0; xx < w; ++xx) {
          acc += x(xx, y) * std::polar(1.0, -2.0 * std::numbers::pi * (double(u * xx) / w + double(v * y) / h));
        }
      }
      out(u, v) = std::norm(acc) / (w * h);
    }
  }
  return out;
}

// Recomputes the loss from the naive periodogram and an independently built
// radius table.
double naive_loss(const Plane& x) {
  const auto p = naive_periodogram(x);
  const int w = x.width(), h = x.height();
  std::map<int, std::vector<double>> rings;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (u == 0 && v == 0) continue;
      const int fx = u < (w + 1) / 2 ? u : u - w;
      const int fy = v < (h + 1) / 2 ? v : v - h;
      // signed range is [-n/2, n/2): for even n the Nyquist bin is negative
      const int sfx = (w % 2 == 0 && u == w / 2) ? -w / 2 : fx;
      const int sfy = (h % 2 == 0 && v == h / 2) ? -h / 2 : fy;
      rings[static_cast<int>(std::lround(std::sqrt(double(sfx * sfx + sfy * sfy))))].push_back(p(u, v));
    }
  }
  double loss = 0.0;
  for (auto& [r, vals] : rings) {
    if (vals.size() < 2) continue;
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    for (double v : vals) loss += (v - mean) * (v - mean);
  }
  return loss;
}

Plane rot90(const Plane& p) {
  const int n = p.width();
  Plane out(n, n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) out(n - 1 - y, x) = p(x, y);
  }
  return out;
}

}  // namespace

TEST(Periodogram, ConstantAndImpulse) {
  const auto c = periodogram(Plane(4, 4, 1.0));
  EXPECT_NEAR(c.dc(), 16.0, 1e-12);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_NEAR(c.values()[i], 0.0, 1e-12);
  Plane imp(4, 4);
  imp(0, 0) = 1.0;
  const auto flat = periodogram(imp);
  for (double v : flat.values().values()) EXPECT_NEAR(v, 1.0 / 16.0, 1e-15);
}

TEST(Periodogram, MatchesNaiveDftAndParseval) {
  Rng rng(1);
  for (auto [w, h] : {std::pair{8, 8}, std::pair{6, 5}}) {
    const auto x = random_plane(rng, w, h);
    const auto p = periodogram(x);
    const auto ref = naive_periodogram(x);
    double ps = 0.0, xs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(p.values()[i], ref[i], 1e-10);
      ps += p.values()[i];
      xs += x[i] * x[i];
    }
    EXPECT_NEAR(ps, xs, 1e-10);
    EXPECT_NEAR(p.dc(), x.size() * x.mean() * x.mean(), 1e-10);
  }
}

TEST(Rings, FourByFour) {
  const RingPartition rp(4, 4);
  ASSERT_FALSE(rp.rings().empty());
  EXPECT_EQ(rp.rings()[0].radius, 1);
  EXPECT_EQ(rp.rings()[0].bins.size(), 8U);
  EXPECT_EQ(rp.ring_of(0), -1);
}

TEST(Rings, TwoByTwo) {
  const RingPartition rp(2, 2);
  ASSERT_EQ(rp.rings().size(), 1U);
  EXPECT_EQ(rp.rings()[0].bins.size(), 3U);
}

TEST(Rings, PartitionProperty) {
  for (auto [w, h] : {std::pair{8, 8}, std::pair{7, 5}, std::pair{16, 4}}) {
    const RingPartition rp(w, h);
    std::set<std::size_t> seen;
    for (std::size_t r = 0; r < rp.rings().size(); ++r) {
      for (auto b : rp.rings()[r].bins) {
        EXPECT_TRUE(seen.insert(b).second);
        EXPECT_EQ(rp.ring_of(b), static_cast<int>(r));
      }
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(w * h - 1));
    EXPECT_EQ(seen.count(0), 0U);
  }
  EXPECT_THROW(RingPartition(1, 4), std::exception);
}

TEST(Rings, SignedFrequency) {
  EXPECT_EQ(signed_frequency(0, 8), 0);
  EXPECT_EQ(signed_frequency(3, 8), 3);
  EXPECT_EQ(signed_frequency(4, 8), -4);
  EXPECT_EQ(signed_frequency(7, 8), -1);
  EXPECT_EQ(signed_frequency(2, 5), 2);
  EXPECT_EQ(signed_frequency(3, 5), -2);
}

TEST(Rapsd, FlatAndImpulse) {
  const RingPartition rp(8, 8);
  const auto flat = rapsd(Periodogram(Plane(8, 8, 0.3)), rp);
  for (const auto& pt : flat.points) EXPECT_NEAR(pt.power, 0.3, 1e-15);
  Plane imp(8, 8);
  imp(0, 0) = 1.0;
  for (const auto& pt : rapsd(periodogram(imp), rp).points) EXPECT_NEAR(pt.power, 1.0 / 64, 1e-15);
}

TEST(Rapsd, MatchesPerRingOracle) {
  Rng rng(2);
  const RingPartition rp(8, 8);
  const Periodogram p(random_plane(rng, 8, 8));
  const auto curve = rapsd(p, rp);
  ASSERT_EQ(curve.points.size(), rp.rings().size());
  for (std::size_t r = 0; r < curve.points.size(); ++r) {
    double s = 0.0;
    for (auto b : rp.rings()[r].bins) s += p.values()[b];
    EXPECT_NEAR(curve.points[r].power, s / rp.rings()[r].bins.size(), 1e-13);
  }
  EXPECT_EQ(curve.dc, p.dc());
}

TEST(Anisotropy, RadiallySymmetricIsZero) {
  const RingPartition rp(8, 8);
  Plane p(8, 8);
  for (std::size_t r = 0; r < rp.rings().size(); ++r) {
    for (auto b : rp.rings()[r].bins) p[b] = 1.0 + r;
  }
  for (const auto& pt : anisotropy(Periodogram(p), rp)) {
    if (pt.count >= 2) {
      ASSERT_TRUE(pt.value.has_value());
      EXPECT_EQ(*pt.value, 0.0);
    }
  }
}

TEST(Anisotropy, TwoSampleRingIsTwo) {
  // on a 4x2 lattice the radius-2 ring holds exactly (-2,0) and (-2,-1)
  const RingPartition rp(4, 2);
  const Ring* ring = nullptr;
  for (const auto& r : rp.rings()) {
    if (r.radius == 2) ring = &r;
  }
  ASSERT_NE(ring, nullptr);
  ASSERT_EQ(ring->bins.size(), 2U);
  Plane p(4, 2, 1.0);
  p[ring->bins[0]] = 0.0;
  p[ring->bins[1]] = 2.0 * 0.7;
  for (const auto& pt : anisotropy(Periodogram(p), rp)) {
    if (pt.radius == 2) EXPECT_EQ(*pt.value, 2.0);
  }
}

TEST(Anisotropy, ZeroPowerRingIsUndefined) {
  const auto curve = anisotropy(periodogram(Plane(8, 8, 1.0)), RingPartition(8, 8));
  for (const auto& pt : curve) EXPECT_FALSE(pt.value.has_value());
}

TEST(Anisotropy, WhiteNoiseNearZeroDecibels) {
  const RingPartition rp(64, 64);
  double total = 0.0;
  for (int seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    const auto h = classic::white_noise_threshold(constant_image(0.5, 64, 64), rng);
    total += *mean_anisotropy(anisotropy(periodogram(h.plane()), rp));
  }
  EXPECT_LT(std::abs(10.0 * std::log10(total / 64)), 2.0);
}

TEST(AnisotropyLoss, ConstantIsZeroWithZeroGradient) {
  EXPECT_NEAR(anisotropy_loss(Plane(8, 8, 0.4)), 0.0, 1e-20);
  const auto grad = anisotropy_loss_backward(Plane(8, 8, 0.4));
  for (double g : grad.values()) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(AnisotropyLoss, MatchesNaive) {
  Rng rng(3);
  for (auto [w, h] : {std::pair{8, 8}, std::pair{6, 6}, std::pair{5, 7}}) {
    const auto x = random_plane(rng, w, h);
    EXPECT_NEAR(anisotropy_loss(x), naive_loss(x), 1e-10);
    EXPECT_GE(anisotropy_loss(x), 0.0);
  }
}

TEST(AnisotropyLoss, BackwardMatchesFiniteDifferences) {
  Rng rng(4);
  for (auto [w, h] : {std::pair{6, 6}, std::pair{8, 8}, std::pair{5, 4}}) {
    const auto x = random_plane(rng, w, h);
    const auto g = anisotropy_loss_backward(x);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      const double fd = (anisotropy_loss(xp) - anisotropy_loss(xm)) / 2e-6;
      worst = std::max(worst, std::abs(fd - g[i]) / std::max(std::abs(fd), 1e-3));
    }
    EXPECT_LT(worst, 1e-5) << w << "x" << h;
  }
}

TEST(AnisotropyLoss, RotationEquivariance) {
  Rng rng(5);
  const auto x = random_plane(rng, 8, 8);
  const auto g_rot = anisotropy_loss_backward(rot90(x));
  const auto rot_g = rot90(anisotropy_loss_backward(x));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(g_rot[i], rot_g[i], 1e-12);
}
