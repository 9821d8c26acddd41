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

#include "htlab/error.hpp"
#include "htlab/hvs.hpp"
#include "htlab/rng.hpp"

using namespace htlab;
using namespace htlab::hvs;

namespace {

Plane random_plane(Rng& rng, int w, int h) {
  Plane p(w, h);
  for (auto& v : p.values()) v = rng.uniform();
  return p;
}

// Direct zero-padded filter, written as a sum over source pixels.
Plane brute_convolve(const Plane& in, const Kernel& k) {
  Plane out(in.width(), in.height());
  const int r = k.radius();
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < in.height(); ++sy) {
        for (int sx = 0; sx < in.width(); ++sx) {
          const int dx = x - sx, dy = y - sy;
          if (std::abs(dx) <= r && std::abs(dy) <= r) acc += k.at_offset(dx, dy) * in(sx, sy);
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

double second_moment(const Kernel& k) {
  const int r = k.radius();
  double m = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) m += (dx * dx + dy * dy) * k.at_offset(dx, dy);
  }
  return m;
}

}  // namespace

TEST(Gaussian, SizeOneIsIdentity) {
  const auto k = build_gaussian_kernel(1, 2.0);
  ASSERT_EQ(k.weights().size(), 1U);
  EXPECT_EQ(k.weights()[0], 1.0);
}

TEST(Gaussian, CenterWeightMatchesFormula) {
  const auto k = build_gaussian_kernel(3, 1.5);
  double total = 0.0;
  for (int y = -1; y <= 1; ++y) {
    for (int x = -1; x <= 1; ++x) total += std::exp(-(x * x + y * y) / (2.0 * 1.5 * 1.5));
  }
  EXPECT_NEAR(k.at_offset(0, 0), 1.0 / total, 1e-15);
  EXPECT_NEAR(k.at_offset(1, 1), std::exp(-2.0 / 4.5) / total, 1e-15);
}

TEST(Gaussian, NormalizedAndSymmetric) {
  for (int size : {3, 5, 11, 15}) {
    for (double sigma : {0.5, 1.5, 2.0, 4.0}) {
      const auto k = build_gaussian_kernel(size, sigma);
      EXPECT_NEAR(k.sum(), 1.0, 1e-12);
      for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) EXPECT_EQ(k(i, j), k(size - 1 - i, size - 1 - j));
      }
    }
  }
}

TEST(Gaussian, Preconditions) {
  EXPECT_THROW(build_gaussian_kernel(4, 2.0), PreconditionError);
  EXPECT_THROW(build_gaussian_kernel(3, 0.0), PreconditionError);
}

TEST(Nasanen, NormalizedSymmetricPositiveDominant) {
  const auto k = build_nasanen_kernel(11, 2000.0);
  EXPECT_NEAR(k.sum(), 1.0, 1e-12);
  double pos = 0.0, neg = 0.0;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      EXPECT_NEAR(k(i, j), k(10 - i, 10 - j), 1e-15);
      EXPECT_NEAR(k(i, j), k(j, i), 1e-15);
      (k(i, j) > 0 ? pos : neg) += k(i, j);
    }
  }
  EXPECT_GT(pos, 10.0 * std::abs(neg));
  EXPECT_EQ(k.at_offset(0, 0), *std::max_element(k.weights().begin(), k.weights().end()));
}

TEST(Nasanen, RadiallyNonIncreasingLikeDenseConstruction) {
  const NasanenParams params;
  const auto dense = nasanen_psf_dense(2000.0, params);
  const int c = params.dense_grid / 2;
  const auto k = build_nasanen_kernel(11, 2000.0, params);
  // the truncated kernel is a rescaled window of the dense PSF
  const double scale = k.at_offset(0, 0) / dense(c, c);
  for (int dy = -5; dy <= 5; ++dy) {
    for (int dx = -5; dx <= 5; ++dx) {
      EXPECT_NEAR(k.at_offset(dx, dy), scale * dense(c + dx, c + dy), 1e-12);
    }
  }
  // along the axis and the diagonal the response does not grow outward
  for (int r = 1; r <= 5; ++r) {
    EXPECT_LE(k.at_offset(r, 0), k.at_offset(r - 1, 0) + 1e-12);
    EXPECT_LE(k.at_offset(r, r), k.at_offset(r - 1, r - 1) + 1e-12);
  }
}

TEST(Nasanen, LargerScaleWidensKernel) {
  EXPECT_GT(second_moment(build_nasanen_kernel(11, 4000.0)), second_moment(build_nasanen_kernel(11, 2000.0)));
}

TEST(Config, ValidateAndBuild) {
  Config cfg;
  cfg.model = Model::gaussian;
  cfg.size = 5;
  EXPECT_EQ(build_kernel(cfg).size(), 5);
  cfg.size = 6;
  EXPECT_THROW(cfg.validate(), PreconditionError);
  cfg.size = 5;
  cfg.scale = -1.0;
  cfg.model = Model::nasanen;
  EXPECT_THROW(cfg.validate(), PreconditionError);
  EXPECT_EQ(parse_model("gaussian"), Model::gaussian);
  EXPECT_EQ(model_name(Model::nasanen), "nasanen");
  EXPECT_THROW(parse_model("sobel"), PreconditionError);
}

TEST(Convolve, IdentityKernel) {
  Rng rng(1);
  const auto p = random_plane(rng, 7, 5);
  EXPECT_EQ(convolve(p, Kernel(1, {1.0})), p);
}

TEST(Convolve, ConstantInteriorPreserved) {
  const auto k = build_gaussian_kernel(5, 2.0);
  const auto f = convolve_same(Plane(12, 12, 0.5), k, Padding::valid_mask);
  EXPECT_EQ(f.valid_count, 64U);
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 12; ++x) {
      if (f.valid[static_cast<std::size_t>(y) * 12 + x]) EXPECT_NEAR(f.values(x, y), 0.5, 1e-15);
    }
  }
}

TEST(Convolve, MatchesBruteForce) {
  Rng rng(2);
  for (const auto& k : {build_gaussian_kernel(3, 1.0), build_gaussian_kernel(11, 2.0), build_nasanen_kernel(11, 2000.0)}) {
    const auto p = random_plane(rng, 8, 8);
    const auto fast = convolve(p, k), slow = brute_convolve(p, k);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-13);
  }
}

TEST(Convolve, AsymmetricKernelOrientation) {
  // out(x,y) = sum k(dx,dy) in(x-dx, y-dy): a kernel with mass only at dx=+1 shifts right
  std::vector<double> w(9, 0.0);
  w[1 * 3 + 2] = 1.0;
  const Kernel k(3, w);
  Plane p(4, 1);
  p(1, 0) = 1.0;
  const auto out = convolve(p, k);
  EXPECT_EQ(out(2, 0), 1.0);
  EXPECT_EQ(brute_convolve(p, k), out);
}

TEST(Convolve, Linearity) {
  Rng rng(3);
  const auto k = build_nasanen_kernel(11, 2000.0);
  const auto x = random_plane(rng, 16, 16), y = random_plane(rng, 16, 16);
  Plane mix(16, 16);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 0.3 * x[i] - 1.7 * y[i];
  const auto fm = convolve(mix, k), fx = convolve(x, k), fy = convolve(y, k);
  for (std::size_t i = 0; i < mix.size(); ++i) EXPECT_NEAR(fm[i], 0.3 * fx[i] - 1.7 * fy[i], 1e-12);
}

TEST(Convolve, ToggleLocality) {
  Rng rng(4);
  const auto k = build_gaussian_kernel(5, 2.0);
  auto p = random_plane(rng, 16, 16);
  const auto before = convolve(p, k);
  p(3, 12) += 1.0;
  const auto after = convolve(p, k);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const bool inside = std::abs(x - 3) <= 2 && std::abs(y - 12) <= 2;
      if (!inside) EXPECT_EQ(before(x, y), after(x, y));
    }
  }
}

TEST(Convolve, InteriorMeanPreserved) {
  Rng rng(5);
  const auto k = build_gaussian_kernel(11, 2.0);
  // periodic-free check: a plane zero outside an inner block keeps its total mass
  Plane p(40, 40);
  for (int y = 10; y < 30; ++y) {
    for (int x = 10; x < 30; ++x) p(x, y) = rng.uniform();
  }
  double a = 0.0, b = 0.0;
  const auto f = convolve(p, k);
  for (std::size_t i = 0; i < p.size(); ++i) {
    a += p[i];
    b += f[i];
  }
  EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(ValidMask, EmptyWhenKernelTooLarge) {
  const auto f = convolve_same(Plane(5, 5, 0.2), build_gaussian_kernel(11, 2.0), Padding::valid_mask);
  EXPECT_EQ(f.valid_count, 0U);
}

TEST(KernelCsv, RoundTrip) {
  const auto k = build_nasanen_kernel(11, 2000.0);
  const auto back = kernel_from_csv(kernel_to_csv(k));
  EXPECT_EQ(back.weights(), k.weights());
}
