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

#include <complex>
#include <span>
#include <vector>

#include "htlab/image.hpp"

namespace htlab::fft {

using Complex = std::complex<double>;

bool is_power_of_two(int n) noexcept;

/// In-place 1D DFT, X_k = sum_n x_n exp(-2 pi i k n / N). `inverse` flips the
/// exponent sign and does not scale. Radix-2 for powers of two, direct otherwise.
void transform(std::span<Complex> data, bool inverse = false);

/// 2D DFT of a row-major width x height grid (unscaled both ways).
std::vector<Complex> transform2d(std::vector<Complex> data, int width, int height, bool inverse = false);
std::vector<Complex> dft2(const Plane& image);

}  // namespace htlab::fft
