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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "htlab/image.hpp"

namespace htlab {

/// Parses binary (P5) or ASCII (P2) PGM, maxval <= 65535. Tones are value/maxval.
ContoneImage parse_pgm(std::span<const std::uint8_t> bytes);
ContoneImage load_pgm(const std::filesystem::path& path);

/// P5 with the given maxval (<= 255 writes one byte per sample, else two, big-endian).
std::vector<std::uint8_t> encode_pgm(const Plane& tones, int maxval = 255);
void save_pgm(const ContoneImage& image, const std::filesystem::path& path, int maxval = 255);

/// P4 PBM. Netpbm convention: bit 1 = black ink (tone 0), bit 0 = white (tone 1).
std::vector<std::uint8_t> encode_pbm(const HalftoneImage& h);
HalftoneImage parse_pbm(std::span<const std::uint8_t> bytes);
void save_pbm(const HalftoneImage& h, const std::filesystem::path& path);
HalftoneImage load_pbm(const std::filesystem::path& path);

/// Multitone output as P5 with maxval L-1, one sample per level index.
void save_multitone_pgm(const MultitoneImage& image, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace htlab
