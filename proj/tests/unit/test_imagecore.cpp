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
#include <filesystem>
#include <string>

#include "htlab/error.hpp"
#include "htlab/image.hpp"
#include "htlab/netpbm.hpp"
#include "htlab/rng.hpp"

using namespace htlab;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

// Straight transcription of the public-domain reference generator, kept
// separate from the library so a typo in one shows up as a mismatch.
struct ReferenceXoshiro {
  std::uint64_t s[4];
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("htlab_test_" + name);
}

}  // namespace

TEST(Rng, SplitmixKnownAnswers) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(state), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(splitmix64(state), 0x06c45d188009454fULL);
}

TEST(Rng, MatchesReferenceGenerator) {
  std::uint64_t sm = 12345;
  ReferenceXoshiro ref{};
  for (auto& w : ref.s) w = splitmix64(sm);
  Rng rng(12345);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(rng.next_u64(), ref.next()) << "draw " << i;
}

TEST(Rng, EqualSeedsEqualStreamsDifferentSeedsDiffer) {
  Rng a(1), b(1), c(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    same += x == c.next_u64();
  }
  EXPECT_EQ(same, 0);
}

TEST(Rng, UniformRangeAndIndexBounds) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.uniform_index(7), 7U);
  }
}

TEST(Rng, SplitGivesIndependentReproducibleStream) {
  Rng a(9), b(9);
  Rng ca = a.split(), cb = b.split();
  EXPECT_EQ(ca.state(), cb.state());
  EXPECT_NE(ca.next_u64(), a.next_u64());
}

TEST(Rng, StateRoundTrip) {
  Rng a(5);
  a.next_u64();
  Rng b = Rng::from_state(a.state());
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Image, ContoneRejectsOutOfRange) {
  EXPECT_THROW(ContoneImage(Plane(2, 2, 1.5)), PreconditionError);
  EXPECT_THROW(ContoneImage(Plane(2, 2, -0.1)), PreconditionError);
  EXPECT_NO_THROW(ContoneImage(Plane(2, 2, 1.0)));
}

TEST(Image, HalftoneRejectsNonBinary) {
  EXPECT_THROW(HalftoneImage(Plane(2, 2, 0.5)), PreconditionError);
}

TEST(Image, PlaneRejectsBadDims) {
  EXPECT_THROW(Plane(0, 3), PreconditionError);
  EXPECT_THROW(Plane(2, 2, std::vector<double>(3)), ShapeError);
}

TEST(Image, ConstantImage) {
  const auto c = constant_image(0.5, 4, 4);
  EXPECT_EQ(c.size(), 16U);
  for (double v : c.plane().values()) EXPECT_EQ(v, 0.5);
  const auto white = constant_image(1.0, 3, 2);
  for (double v : white.plane().values()) EXPECT_EQ(v, 1.0);
  EXPECT_THROW(constant_image(1.5, 2, 2), PreconditionError);
}

TEST(Image, NoiseMapDeterministic) {
  Rng a(7), b(7);
  EXPECT_EQ(gaussian_noise_map(a, 2, 2).plane(), gaussian_noise_map(b, 2, 2).plane());
  Rng c(7);
  EXPECT_THROW(gaussian_noise_map(c, 0, 2), PreconditionError);
}

TEST(Image, NoiseMapMoments) {
  Rng rng(2024);
  const auto z = gaussian_noise_map(rng, 1000, 1000);
  double sum = 0.0, sq = 0.0;
  for (double v : z.plane().values()) {
    sum += v;
    sq += v * v;
  }
  const double n = 1e6, mean = sum / n, var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(Image, NoiseMapOddSizeUsesHalfPair) {
  Rng rng(1);
  const auto z = gaussian_noise_map(rng, 3, 1);
  for (double v : z.plane().values()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Image, RandomCrop) {
  Plane p(4, 4);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(i) / 16.0;
  const ContoneImage img(p);
  Rng a(11);
  EXPECT_EQ(random_crop(a, img, 4), img);
  Rng b(11), c(11);
  const auto x = random_crop(b, img, 3), y = random_crop(c, img, 3);
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.width(), 3);
  // the crop must be a contiguous window of the source
  const int x0 = static_cast<int>(std::lround(x(0, 0) * 16)) % 4;
  const int y0 = static_cast<int>(std::lround(x(0, 0) * 16)) / 4;
  for (int yy = 0; yy < 3; ++yy) {
    for (int xx = 0; xx < 3; ++xx) EXPECT_EQ(x(xx, yy), img(x0 + xx, y0 + yy));
  }
  Rng d(1);
  EXPECT_THROW(random_crop(d, ContoneImage(Plane(64, 64)), 65), PreconditionError);
}

TEST(Netpbm, P5Mapping) {
  auto bytes = bytes_of("P5\n2 2\n255\n");
  for (int v : {0, 128, 255, 64}) bytes.push_back(static_cast<std::uint8_t>(v));
  const auto c = parse_pgm(bytes);
  EXPECT_EQ(c(0, 0), 0.0);
  EXPECT_EQ(c(1, 0), 128.0 / 255.0);
  EXPECT_EQ(c(0, 1), 1.0);
  EXPECT_EQ(c(1, 1), 64.0 / 255.0);
}

TEST(Netpbm, P2Maxval) {
  EXPECT_EQ(parse_pgm(bytes_of("P2\n# comment\n1 1\n100\n100\n"))(0, 0), 1.0);
}

TEST(Netpbm, SixteenBitP5) {
  auto bytes = bytes_of("P5 1 1 65535\n");
  bytes.push_back(0x80);
  bytes.push_back(0x00);
  EXPECT_EQ(parse_pgm(bytes)(0, 0), 32768.0 / 65535.0);
}

TEST(Netpbm, ErrorsAreDistinct) {
  auto kind_of = [](const std::string& s) {
    try {
      parse_pgm(bytes_of(s));
    } catch (const ParseError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << s;
    return ParseError::Kind::bad_value;
  };
  EXPECT_EQ(kind_of("P7\n1 1\n255\n"), ParseError::Kind::unsupported_magic);
  EXPECT_EQ(kind_of("P5\nx 1\n255\n"), ParseError::Kind::malformed_header);
  EXPECT_EQ(kind_of("P5\n2 2\n255\n\x01"), ParseError::Kind::truncated_payload);
  EXPECT_EQ(kind_of("P2\n1 1\n10\n11\n"), ParseError::Kind::bad_value);
}

TEST(Netpbm, ErrorNamesOffset) {
  try {
    parse_pgm(bytes_of("P5\n2 2\n255\n\x01"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 12U);
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
}

TEST(Netpbm, PgmRoundTripPreservesBytes) {
  Rng rng(4);
  auto bytes = bytes_of("P5\n5 3\n255\n");
  for (int i = 0; i < 15; ++i) bytes.push_back(static_cast<std::uint8_t>(rng.uniform_index(256)));
  EXPECT_EQ(encode_pgm(parse_pgm(bytes).plane()), bytes);
}

TEST(Netpbm, PbmPolarity) {
  const auto white = encode_pbm(HalftoneImage(Plane(8, 1, 1.0)));
  EXPECT_EQ(white.back(), 0x00);
  const auto black = encode_pbm(HalftoneImage(Plane(8, 1, 0.0)));
  EXPECT_EQ(black.back(), 0xff);
}

TEST(Netpbm, PbmRoundTrip) {
  Rng rng(8);
  for (int w : {8, 5, 13}) {
    Plane p(w, 3);
    for (auto& v : p.values()) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
    const HalftoneImage h(p);
    const auto path = temp_path("rt_" + std::to_string(w) + ".pbm");
    save_pbm(h, path);
    EXPECT_EQ(load_pbm(path), h);
    std::filesystem::remove(path);
  }
}

TEST(Netpbm, MissingFileIsIoError) {
  EXPECT_THROW(load_pgm("/nonexistent/htlab.pgm"), IoError);
}
