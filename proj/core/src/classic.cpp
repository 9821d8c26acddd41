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

#include "htlab/classic.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "htlab/error.hpp"
#include "htlab/rng.hpp"

namespace htlab::classic {

DitherArray::DitherArray(int order, std::vector<int> indices) : order_(order), indices_(std::move(indices)) {
  if (order <= 0 || indices_.size() != static_cast<std::size_t>(order) * order) {
    throw ShapeError("dither array size mismatch");
  }
}

double DitherArray::threshold(int x, int y) const {
  return (index(x, y) + 0.5) / static_cast<double>(order_ * order_);
}

DitherArray bayer_matrix(int order) {
  if (order <= 0 || (order & (order - 1)) != 0) {
    throw PreconditionError("Bayer order must be a power of two, got " + std::to_string(order));
  }
  std::vector<int> m{0};
  for (int n = 1; n < order; n *= 2) {
    // M_2n = [[4M, 4M+2], [4M+3, 4M+1]]
    std::vector<int> next(static_cast<std::size_t>(4) * n * n);
    const int n2 = 2 * n;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const int v = 4 * m[static_cast<std::size_t>(y) * n + x];
        next[static_cast<std::size_t>(y) * n2 + x] = v;
        next[static_cast<std::size_t>(y) * n2 + x + n] = v + 2;
        next[static_cast<std::size_t>(y + n) * n2 + x] = v + 3;
        next[static_cast<std::size_t>(y + n) * n2 + x + n] = v + 1;
      }
    }
    m = std::move(next);
  }
  return DitherArray(order, std::move(m));
}

HalftoneImage ordered_dither(const ContoneImage& c, const DitherArray& array) {
  Plane h(c.width(), c.height());
  const int n = array.order();
  for (int y = 0; y < c.height(); ++y) {
    for (int x = 0; x < c.width(); ++x) h(x, y) = c(x, y) > array.threshold(x % n, y % n) ? 1.0 : 0.0;
  }
  return HalftoneImage(std::move(h));
}

HalftoneImage white_noise_threshold(const ContoneImage& c, Rng& rng) {
  Plane h(c.width(), c.height());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = c.plane()[i] > rng.uniform() ? 1.0 : 0.0;
  return HalftoneImage(std::move(h));
}

HalftoneImage floyd_steinberg(const ContoneImage& c, Scan scan) {
  const int w = c.width(), ht = c.height();
  Plane work = c.plane();
  Plane h(w, ht);
  auto push = [&](int x, int y, double amount) {
    if (x >= 0 && x < w && y < ht) work(x, y) += amount;
  };
  for (int y = 0; y < ht; ++y) {
    const bool reverse = scan == Scan::serpentine && (y % 2 == 1);
    const int dir = reverse ? -1 : 1;
    for (int i = 0; i < w; ++i) {
      const int x = reverse ? w - 1 - i : i;
      const double v = work(x, y);
      const double out = v >= 0.5 ? 1.0 : 0.0;
      h(x, y) = out;
      const double err = v - out;
      push(x + dir, y, err * 7.0 / 16.0);
      push(x - dir, y + 1, err * 3.0 / 16.0);
      push(x, y + 1, err * 5.0 / 16.0);
      push(x + dir, y + 1, err * 1.0 / 16.0);
    }
  }
  return HalftoneImage(std::move(h));
}

namespace {

/// Filtered-error state for DBS: err = HVS(h) - HVS(c), zero padded.
class DbsState {
 public:
  DbsState(const Plane& h, const Plane& c, const hvs::Kernel& kernel)
      : kernel_(kernel), h_(h), err_(hvs::convolve(h, kernel)) {
    const Plane fc = hvs::convolve(c, kernel);
    for (std::size_t i = 0; i < err_.size(); ++i) err_[i] -= fc[i];
  }

  const Plane& halftone() const { return h_; }

  double objective() const {
    double s = 0.0;
    for (double e : err_.values()) s += e * e;
    return s / static_cast<double>(err_.size());
  }

  double weight(int dx, int dy) const {
    const int r = kernel_.radius();
    if (dx < -r || dx > r || dy < -r || dy > r) return 0.0;
    return kernel_.at_offset(dx, dy);
  }

  /// Change in the sum of squared filtered error when pixel a changes by da
  /// and (optionally) pixel q changes by dq.
  double change(int ax, int ay, double da, int qx, int qy, double dq) const {
    const int r = kernel_.radius();
    const int w = h_.width(), ht = h_.height();
    const int x0 = std::max(0, std::min(ax, qx) - r), x1 = std::min(w - 1, std::max(ax, qx) + r);
    const int y0 = std::max(0, std::min(ay, qy) - r), y1 = std::min(ht - 1, std::max(ay, qy) + r);
    double total = 0.0;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double shift = weight(x - ax, y - ay) * da + (dq != 0.0 ? weight(x - qx, y - qy) * dq : 0.0);
        const double e = err_(x, y);
        total += (e + shift) * (e + shift) - e * e;
      }
    }
    return total;
  }

  void set(int x, int y, double v) {
    const double d = v - h_(x, y);
    if (d == 0.0) return;
    h_(x, y) = v;
    const int r = kernel_.radius();
    for (int by = std::max(0, y - r); by <= std::min(h_.height() - 1, y + r); ++by) {
      for (int bx = std::max(0, x - r); bx <= std::min(h_.width() - 1, x + r); ++bx) {
        err_(bx, by) += kernel_.at_offset(bx - x, by - y) * d;
      }
    }
  }

 private:
  const hvs::Kernel& kernel_;
  Plane h_;
  Plane err_;
};

// N, NE, E, SE, S, SW, W, NW
constexpr std::array<std::array<int, 2>, 8> kNeighbours{{{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};
constexpr double kImprovementTolerance = 1e-12;

}  // namespace

DbsResult dbs_search(const ContoneImage& c, const DbsConfig& config, Rng& rng) {
  return dbs_search(c, config, hvs::build_kernel(config.hvs), rng);
}

DbsResult dbs_search(const ContoneImage& c, const DbsConfig& config, const hvs::Kernel& kernel, Rng& rng) {
  if (config.max_sweeps < 1) throw PreconditionError("DBS needs max_sweeps >= 1");
  HalftoneImage seed = config.seed ? *config.seed : white_noise_threshold(c, rng);
  require_same_shape(seed.plane(), c.plane(), "dbs_search seed");

  DbsState state(seed.plane(), c.plane(), kernel);
  DbsResult result;
  result.trace.push_back(state.objective());
  const int w = c.width(), ht = c.height();
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    std::size_t accepted = 0;
    for (int y = 0; y < ht; ++y) {
      for (int x = 0; x < w; ++x) {
        const double cur = state.halftone()(x, y);
        const double d = 1.0 - 2.0 * cur;
        double best = state.change(x, y, d, x, y, 0.0);
        int best_move = -1;  // -1 = toggle
        if (config.moves == MoveSet::toggle_swap) {
          for (int k = 0; k < 8; ++k) {
            const int qx = x + kNeighbours[k][0], qy = y + kNeighbours[k][1];
            if (qx < 0 || qx >= w || qy < 0 || qy >= ht) continue;
            if (state.halftone()(qx, qy) == cur) continue;
            const double delta = state.change(x, y, d, qx, qy, -d);
            if (delta < best) {
              best = delta;
              best_move = k;
            }
          }
        }
        if (best < -kImprovementTolerance) {
          state.set(x, y, 1.0 - cur);
          if (best_move >= 0) state.set(x + kNeighbours[best_move][0], y + kNeighbours[best_move][1], cur);
          ++accepted;
        }
      }
    }
    result.moves += accepted;
    result.sweeps = sweep + 1;
    result.trace.push_back(state.objective());
    if (accepted == 0) break;
  }
  result.halftone = HalftoneImage(state.halftone());
  return result;
}

}  // namespace htlab::classic
