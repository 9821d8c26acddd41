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

#include "htlab/optim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "htlab/error.hpp"
#include "htlab/netpbm.hpp"

namespace htlab::nn {

Adam::Adam(std::size_t parameter_count, AdamConfig config)
    : config_(config), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads, double lr) {
  if (params.size() != m_.size() || grads.size() != m_.size()) throw ShapeError("adam: parameter count mismatch");
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grads[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grads[i] * grads[i];
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + config_.eps);
  }
}

void Adam::restore(std::vector<double> m, std::vector<double> v, std::uint64_t steps) {
  if (m.size() != m_.size() || v.size() != v_.size()) throw FormatError("adam state size mismatch");
  m_ = std::move(m);
  v_ = std::move(v);
  t_ = steps;
}

double CosineSchedule::at(std::int64_t t) const {
  if (total <= 0 || t >= total) return end;
  if (t <= 0) return start;
  const double frac = static_cast<double>(t) / static_cast<double>(total);
  return end + (start - end) * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
}

namespace {

constexpr char kMagic[4] = {'H', 'T', 'N', 'N'};

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw FormatError("checkpoint truncated at byte " + std::to_string(pos_));
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  std::vector<double> doubles(std::uint64_t count) {
    if ((bytes_.size() - pos_) / 8 < count) throw FormatError("checkpoint truncated in parameter block");
    std::vector<double> v(count);
    for (auto& d : v) d = get<double>();
    return v;
  }

  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const PolicyNetwork& net, const Adam& adam, const TrainingState& state) {
  const auto params = net.parameters();
  if (adam.first_moment().size() != params.size()) throw ShapeError("adam state does not match network");
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.arch().channels));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.arch().blocks));
  put<std::int64_t>(out, state.iteration);
  for (auto w : state.rng) put<std::uint64_t>(out, w);
  put<std::uint64_t>(out, adam.steps());
  put<std::uint64_t>(out, params.size());
  for (double d : params) put(out, d);
  for (double d : adam.first_moment()) put(out, d);
  for (double d : adam.second_moment()) put(out, d);
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const PolicyNetwork& net, const Adam& adam,
                     const TrainingState& state) {
  write_file(path, encode_checkpoint(net, adam, state));
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("not a checkpoint file");
  Cursor cur(bytes.subspan(4));
  const auto version = cur.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  ck.arch.channels = static_cast<int>(cur.get<std::uint32_t>());
  ck.arch.blocks = static_cast<int>(cur.get<std::uint32_t>());
  ck.state.iteration = cur.get<std::int64_t>();
  for (auto& w : ck.state.rng) w = cur.get<std::uint64_t>();
  ck.adam_steps = cur.get<std::uint64_t>();
  const auto count = cur.get<std::uint64_t>();
  if (ck.arch.channels <= 0 || ck.arch.blocks < 0) throw FormatError("checkpoint has invalid architecture");
  if (count != PolicyNetwork(ck.arch).parameter_count()) {
    throw FormatError("checkpoint parameter count does not match its architecture");
  }
  ck.params = cur.doubles(count);
  ck.m = cur.doubles(count);
  ck.v = cur.doubles(count);
  if (!cur.done()) throw FormatError("trailing bytes after checkpoint");
  return ck;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

TrainingState load_checkpoint(const std::filesystem::path& path, PolicyNetwork& net, Adam& adam) {
  Checkpoint ck = read_checkpoint(path);
  if (!(ck.arch == net.arch())) {
    throw ShapeError("checkpoint architecture (" + std::to_string(ck.arch.channels) + "ch, " +
                      std::to_string(ck.arch.blocks) + " blocks) does not match network (" +
                      std::to_string(net.arch().channels) + "ch, " + std::to_string(net.arch().blocks) + " blocks)");
  }
  std::copy(ck.params.begin(), ck.params.end(), net.parameters().begin());
  adam.restore(std::move(ck.m), std::move(ck.v), ck.adam_steps);
  return ck.state;
}

}  // namespace htlab::nn
