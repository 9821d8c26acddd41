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
#include <optional>
#include <vector>

#include "htlab/hvs.hpp"
#include "htlab/image.hpp"

namespace htlab {
class Rng;
}

namespace htlab::classic {

/// n x n ordered-dither array. Index i maps to threshold (i + 0.5) / n^2.
class DitherArray {
 public:
  DitherArray(int order, std::vector<int> indices);

  int order() const noexcept { return order_; }
  int index(int x, int y) const { return indices_[static_cast<std::size_t>(y) * order_ + x]; }
  double threshold(int x, int y) const;
  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  int order_;
  std::vector<int> indices_;
};

DitherArray bayer_matrix(int order);

/// h = 1 where c exceeds the tiled threshold.
HalftoneImage ordered_dither(const ContoneImage& c, const DitherArray& array);

/// h = 1 where c exceeds an independent U(0,1) draw.
HalftoneImage white_noise_threshold(const ContoneImage& c, Rng& rng);

enum class Scan { raster, serpentine };

/// Classic 7/16, 3/16, 5/16, 1/16 error diffusion at threshold 0.5 (ties to white).
/// Error pushed past the image border is dropped.
HalftoneImage floyd_steinberg(const ContoneImage& c, Scan scan = Scan::raster);

enum class MoveSet { toggle, toggle_swap };

struct DbsConfig {
  hvs::Config hvs;
  int max_sweeps = 20;
  MoveSet moves = MoveSet::toggle_swap;
  /// Starting halftone. White-noise threshold of c when unset.
  std::optional<HalftoneImage> seed;
};

struct DbsResult {
  HalftoneImage halftone;
  /// HVS-MSE of the seed, then after each sweep. Non-increasing.
  std::vector<double> trace;
  int sweeps = 0;
  std::size_t moves = 0;
};

/// Direct binary search on the zero-padded HVS-MSE. Pixels are visited in
/// raster order; each visit tries a toggle and swaps with the 8 neighbours
/// (N, NE, E, SE, S, SW, W, NW) and keeps the best strictly improving move.
DbsResult dbs_search(const ContoneImage& c, const DbsConfig& config, Rng& rng);
DbsResult dbs_search(const ContoneImage& c, const DbsConfig& config, const hvs::Kernel& kernel, Rng& rng);

}  // namespace htlab::classic
