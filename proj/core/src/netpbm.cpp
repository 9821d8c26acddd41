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

#include "htlab/netpbm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "htlab/error.hpp"

namespace htlab {

namespace {

using Kind = ParseError::Kind;

/// Cursor over a Netpbm byte buffer that tracks the current offset.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  std::string magic() {
    if (bytes_.size() < 2) throw ParseError(Kind::malformed_header, 0, "file too short for a magic number");
    std::string m{static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
    pos_ = 2;
    return m;
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  /// Decimal header field or ASCII sample.
  long number(Kind kind_on_missing, const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) {
      throw ParseError(kind_on_missing, pos_, std::string("unexpected end of data reading ") + what);
    }
    if (!std::isdigit(bytes_[pos_])) {
      throw ParseError(Kind::malformed_header, pos_, std::string("expected digit for ") + what);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) throw ParseError(Kind::malformed_header, pos_, std::string(what) + " too large");
      ++pos_;
    }
    return value;
  }

  /// Exactly one whitespace byte separates the header from a binary raster.
  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError(Kind::malformed_header, pos_, "missing whitespace before raster");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw ParseError(Kind::truncated_payload, bytes_.size(),
                       std::string(what) + ": expected " + std::to_string(n) + " bytes, found " +
                           std::to_string(bytes_.size() - pos_));
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void read_dims(Reader& r, int& width, int& height) {
  const long w = r.number(Kind::malformed_header, "width");
  const long h = r.number(Kind::malformed_header, "height");
  if (w <= 0 || h <= 0) throw ParseError(Kind::malformed_header, r.offset(), "image dimensions must be positive");
  width = static_cast<int>(w);
  height = static_cast<int>(h);
}

}  // namespace

ContoneImage parse_pgm(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::string magic = r.magic();
  if (magic != "P5" && magic != "P2") throw ParseError(Kind::unsupported_magic, 0, "unsupported magic '" + magic + "'");
  int width = 0, height = 0;
  read_dims(r, width, height);
  const long maxval = r.number(Kind::malformed_header, "maxval");
  if (maxval < 1 || maxval > 65535) throw ParseError(Kind::malformed_header, r.offset(), "maxval must be in [1, 65535]");

  Plane p(width, height);
  const auto count = p.size();
  if (magic == "P5") {
    r.single_whitespace();
    const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
    const std::size_t start = r.offset();
    auto raster = r.take(count * sample_bytes, "PGM raster");
    for (std::size_t i = 0; i < count; ++i) {
      const long v = sample_bytes == 1 ? raster[i] : (raster[2 * i] << 8) | raster[2 * i + 1];
      if (v > maxval) throw ParseError(Kind::bad_value, start + i * sample_bytes, "sample exceeds maxval");
      p[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = r.offset();
      const long v = r.number(Kind::truncated_payload, "PGM sample");
      if (v > maxval) throw ParseError(Kind::bad_value, at, "sample exceeds maxval");
      p[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  }
  return ContoneImage(std::move(p));
}

HalftoneImage parse_pbm(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::string magic = r.magic();
  if (magic != "P4") throw ParseError(Kind::unsupported_magic, 0, "unsupported magic '" + magic + "'");
  int width = 0, height = 0;
  read_dims(r, width, height);
  r.single_whitespace();
  const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
  auto raster = r.take(row_bytes * height, "PBM raster");
  // file bits mark black ink; in memory a set bit is white
  std::vector<std::uint8_t> white(raster.begin(), raster.end());
  for (auto& b : white) b = static_cast<std::uint8_t>(~b);
  return HalftoneImage::from_packed(width, height, white);
}

std::vector<std::uint8_t> encode_pgm(const Plane& tones, int maxval) {
  if (maxval < 1 || maxval > 65535) throw PreconditionError("maxval must be in [1, 65535]");
  const std::string header =
      "P5\n" + std::to_string(tones.width()) + " " + std::to_string(tones.height()) + "\n" + std::to_string(maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + tones.size() * (maxval < 256 ? 1 : 2));
  for (double t : tones.values()) {
    if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("tone outside [0,1] in PGM export");
    const auto v = static_cast<unsigned>(std::lround(t * maxval));
    if (maxval < 256) {
      out.push_back(static_cast<std::uint8_t>(v));
    } else {
      out.push_back(static_cast<std::uint8_t>(v >> 8));
      out.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_pbm(const HalftoneImage& h) {
  const std::string header = "P4\n" + std::to_string(h.width()) + " " + std::to_string(h.height()) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t row_bytes = (static_cast<std::size_t>(h.width()) + 7) / 8;
  auto bits = h.packed();
  for (int y = 0; y < h.height(); ++y) {
    for (std::size_t i = 0; i < row_bytes; ++i) {
      std::uint8_t b = static_cast<std::uint8_t>(~bits[y * row_bytes + i]);
      // padding bits past the last column stay zero
      const int valid = std::min<int>(8, h.width() - static_cast<int>(i) * 8);
      if (valid < 8) b &= static_cast<std::uint8_t>(0xff << (8 - valid));
      out.push_back(b);
    }
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

ContoneImage load_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

void save_pgm(const ContoneImage& image, const std::filesystem::path& path, int maxval) {
  write_file(path, encode_pgm(image.plane(), maxval));
}

void save_pbm(const HalftoneImage& h, const std::filesystem::path& path) { write_file(path, encode_pbm(h)); }

HalftoneImage load_pbm(const std::filesystem::path& path) { return parse_pbm(read_file(path)); }

void save_multitone_pgm(const MultitoneImage& image, const std::filesystem::path& path) {
  write_file(path, encode_pgm(image.plane(), image.levels() - 1));
}

}  // namespace htlab
