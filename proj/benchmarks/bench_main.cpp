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

#include <benchmark/benchmark.h>

#include <vector>

#include "htlab/classic.hpp"
#include "htlab/hvs.hpp"
#include "htlab/metrics.hpp"
#include "htlab/nn.hpp"
#include "htlab/rl.hpp"
#include "htlab/rng.hpp"
#include "htlab/spectral.hpp"

using namespace htlab;

namespace {

Plane random_plane(Rng& rng, int n) {
  Plane p(n, n);
  for (auto& v : p.values()) v = rng.uniform();
  return p;
}

Plane random_binary(Rng& rng, int n) {
  Plane p(n, n);
  for (auto& v : p.values()) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
  return p;
}

// O(k^2) per pixel toggle, all pixels.
void BM_ToggleDelta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Plane c = random_plane(rng, n), h = random_binary(rng, n);
  const metrics::RewardContext ctx(h, c, metrics::Config{});
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t a = 0; a < h.size(); ++a) acc += ctx.toggle_delta(a);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.size()));
}
BENCHMARK(BM_ToggleDelta)->Arg(32)->Arg(64);

// The same deltas by rebuilding the reward for every toggle.
void BM_ToggleRecompute(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Plane c = random_plane(rng, n), h = random_binary(rng, n);
  const metrics::Config cfg;
  const auto kernel = hvs::build_kernel(cfg.hvs);
  const double base = metrics::RewardContext(h, c, cfg, kernel).reward();
  for (auto _ : state) {
    double acc = 0.0;
    Plane flipped = h;
    for (std::size_t a = 0; a < 64; ++a) {
      flipped[a] = 1.0 - flipped[a];
      acc += metrics::RewardContext(flipped, c, cfg, kernel).reward() - base;
      flipped[a] = h[a];
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_ToggleRecompute)->Arg(32)->Arg(64);

void BM_ConvForward(benchmark::State& state) {
  const int ch = static_cast<int>(state.range(0));
  Rng rng(2);
  nn::Tensor x(4, ch, 64, 64);
  for (auto& v : x.values()) v = rng.uniform();
  std::vector<double> w(static_cast<std::size_t>(ch) * ch * 9), b(ch, 0.0);
  for (auto& v : w) v = rng.uniform() - 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(nn::conv2d_forward(x, w, b, ch));
}
BENCHMARK(BM_ConvForward)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_NetworkForward(benchmark::State& state) {
  Rng rng(3);
  nn::PolicyNetwork net(nn::ArchConfig::mini());
  net.init(rng);
  const auto input = nn::make_input(random_plane(rng, 64), random_plane(rng, 64));
  for (auto _ : state) benchmark::DoNotOptimize(net.predict(input));
}
BENCHMARK(BM_NetworkForward)->Unit(benchmark::kMillisecond);

void BM_Periodogram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  const Plane x = random_plane(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::periodogram(x));
}
BENCHMARK(BM_Periodogram)->Arg(64)->Arg(128)->Arg(100);

void BM_AnisotropyLossBackward(benchmark::State& state) {
  Rng rng(5);
  const Plane x = random_plane(rng, 64);
  const spectral::RingPartition rings(64, 64);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::anisotropy_loss_backward(x, rings));
}
BENCHMARK(BM_AnisotropyLossBackward);

void BM_Dbs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = constant_image(0.3, n, n);
  classic::DbsConfig cfg;
  const auto kernel = hvs::build_kernel(cfg.hvs);
  for (auto _ : state) {
    Rng rng(6);
    benchmark::DoNotOptimize(classic::dbs_search(c, cfg, kernel, rng));
  }
}
BENCHMARK(BM_Dbs)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  rl::TrainConfig cfg;
  cfg.arch = nn::ArchConfig::mini();
  cfg.batch_size = 4;
  cfg.crop_size = 32;
  Rng rng(7);
  std::vector<ContoneImage> data{ContoneImage(random_plane(rng, 64))};
  rl::TrainingSession session(cfg, std::move(data));
  for (auto _ : state) benchmark::DoNotOptimize(rl::train_step(session));
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
