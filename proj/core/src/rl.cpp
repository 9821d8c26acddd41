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

#include "htlab/rl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "htlab/error.hpp"
#include "htlab/multitone.hpp"
#include "htlab/parallel.hpp"
#include "htlab/spectral.hpp"

namespace htlab::rl {

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::reinforce: return "reinforce";
    case Estimator::reinforce_mean_baseline: return "reinforce_meanbaseline";
    case Estimator::coma: return "coma";
    case Estimator::local_expectation: return "local_expectation";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view name) {
  for (auto e : {Estimator::reinforce, Estimator::reinforce_mean_baseline, Estimator::coma,
                 Estimator::local_expectation}) {
    if (estimator_name(e) == name) return e;
  }
  throw PreconditionError("unknown estimator '" + std::string(name) +
                          "' (expected reinforce, reinforce_meanbaseline, coma or local_expectation)");
}

HalftoneImage sample_actions(const Plane& p, Rng& rng) {
  Plane h(p.width(), p.height());
  for (std::size_t i = 0; i < p.size(); ++i) h[i] = rng.uniform() < p[i] ? 1.0 : 0.0;
  return HalftoneImage(std::move(h));
}

double log_prob_derivative(double p, double h) noexcept {
  const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return h >= 0.5 ? 1.0 / pc : -1.0 / (1.0 - pc);
}

namespace {

/// R(h_a = 1, h_-a) - R(h_a = 0, h_-a) for a binary action image.
double two_point_difference(const metrics::RewardModel& reward, std::size_t a) {
  return reward.value(a) >= 0.5 ? -reward.delta(a, 0.0) : reward.delta(a, 1.0);
}

void require_size(const Plane& h, const metrics::RewardModel& reward) {
  if (h.size() != reward.size()) throw ShapeError("reward model does not match the action image");
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (h[a] != reward.value(a)) throw PreconditionError("reward model is inconsistent with the action image");
  }
}

}  // namespace

Plane le_signal(const Plane& h, const metrics::RewardModel& reward) {
  require_size(h, reward);
  Plane g(h.width(), h.height());
  for (std::size_t a = 0; a < h.size(); ++a) g[a] = -two_point_difference(reward, a);
  return g;
}

Plane coma_signal(const Plane& p, const Plane& h, const metrics::RewardModel& reward) {
  require_same_shape(p, h, "coma_signal");
  require_size(h, reward);
  const double r = reward.reward();
  Plane g(h.width(), h.height());
  for (std::size_t a = 0; a < h.size(); ++a) {
    const double other = reward.delta(a, 1.0 - h[a]) + r;
    const double r1 = h[a] >= 0.5 ? r : other;
    const double r0 = h[a] >= 0.5 ? other : r;
    const double baseline = p[a] * r1 + (1.0 - p[a]) * r0;
    g[a] = -log_prob_derivative(p[a], h[a]) * (r - baseline);
  }
  return g;
}

Plane reinforce_signal(const Plane& p, const Plane& h, double reward, double baseline) {
  require_same_shape(p, h, "reinforce_signal");
  Plane g(h.width(), h.height());
  for (std::size_t a = 0; a < h.size(); ++a) g[a] = -log_prob_derivative(p[a], h[a]) * (reward - baseline);
  return g;
}

FunctionReward::FunctionReward(Plane h, Fn fn) : h_(std::move(h)), fn_(std::move(fn)), base_(fn_(h_)) {}

double FunctionReward::delta(std::size_t a, double v) const {
  if (a >= h_.size()) throw PreconditionError("pixel index out of range");
  Plane changed = h_;
  changed[a] = v;
  return fn_(changed) - base_;
}

double enumerate_two_point(int width, int height, const std::vector<TwoChoice>& px, const RewardFn& reward,
                           Plane* grad) {
  const std::size_t n = px.size();
  if (n > kMaxExactPixels) {
    throw PreconditionError("exhaustive enumeration limited to " + std::to_string(kMaxExactPixels) + " pixels");
  }
  if (static_cast<std::size_t>(width) * height != n) throw ShapeError("choice count does not match image size");
  if (grad) *grad = Plane(width, height);
  Plane h(width, height);
  std::vector<double> factor(n), prefix(n + 1), suffix(n + 1);
  double expectation = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t a = 0; a < n; ++a) {
      const bool up = (mask >> a) & 1U;
      h[a] = up ? px[a].value1 : px[a].value0;
      factor[a] = up ? px[a].q : 1.0 - px[a].q;
    }
    prefix[0] = 1.0;
    for (std::size_t a = 0; a < n; ++a) prefix[a + 1] = prefix[a] * factor[a];
    suffix[n] = 1.0;
    for (std::size_t a = n; a-- > 0;) suffix[a] = suffix[a + 1] * factor[a];
    const double r = reward(h);
    expectation += prefix[n] * r;
    if (grad) {
      for (std::size_t a = 0; a < n; ++a) {
        const double sign = ((mask >> a) & 1U) ? 1.0 : -1.0;
        (*grad)[a] += r * sign * px[a].slope * prefix[a] * suffix[a + 1];
      }
    }
  }
  return expectation;
}

namespace {

std::vector<TwoChoice> bernoulli(const Plane& p) {
  std::vector<TwoChoice> px(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) px[a] = {0.0, 1.0, p[a], 1.0};
  return px;
}

}  // namespace

Plane exact_gradient(const Plane& p, const RewardFn& reward) {
  Plane grad;
  enumerate_two_point(p.width(), p.height(), bernoulli(p), reward, &grad);
  return grad;
}

Plane exact_gradient(const Plane& p, const Plane& c, const metrics::Config& config) {
  const auto kernel = hvs::build_kernel(config.hvs);
  return exact_gradient(p, [&](const Plane& h) { return metrics::RewardContext(h, c, config, kernel).reward(); });
}

double exact_expectation(const Plane& p, const RewardFn& reward) {
  return enumerate_two_point(p.width(), p.height(), bernoulli(p), reward, nullptr);
}

metrics::Config TrainConfig::metric_config() const {
  metrics::Config m;
  m.w_s = w_s;
  m.hvs = hvs;
  return m;
}

std::string_view reduction_name(AnisotropyReduction r) { return r == AnisotropyReduction::sum ? "sum" : "mean"; }

AnisotropyReduction parse_reduction(std::string_view name) {
  if (name == "sum") return AnisotropyReduction::sum;
  if (name == "mean") return AnisotropyReduction::mean;
  throw PreconditionError("unknown anisotropy reduction '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (batch_size <= 0) throw PreconditionError("batch_size must be positive");
  if (crop_size <= 0) throw PreconditionError("crop_size must be positive");
  if (iterations < 0) throw PreconditionError("iterations must be non-negative");
  if (!(w_s >= 0.0) || !(w_a >= 0.0)) throw PreconditionError("loss weights must be non-negative");
  if (!(lr_start > 0.0) || !(lr_end > 0.0)) throw PreconditionError("learning rates must be positive");
  if (anisotropy_batch < 0) throw PreconditionError("anisotropy_batch must be non-negative");
  if (arch.channels <= 0 || arch.blocks < 0) throw PreconditionError("invalid network architecture");
  if (levels < 2) throw PreconditionError("levels must be at least 2");
  if (levels > 2 && estimator != Estimator::local_expectation) {
    throw PreconditionError("multitone training supports only the local_expectation estimator");
  }
  if (log_every <= 0) throw PreconditionError("log_every must be positive");
  if (checkpoint_every < 0) throw PreconditionError("checkpoint_every must be non-negative");
  hvs.validate();
}

namespace {

TrainConfig checked(TrainConfig config) {
  config.validate();
  return config;
}

}  // namespace

TrainingSession::TrainingSession(TrainConfig cfg, std::vector<ContoneImage> images)
    : config(checked(cfg)),
      dataset(std::move(images)),
      net(config.arch),
      adam(net.parameter_count()),
      hvs_kernel(hvs::build_kernel(config.hvs)),
      rng(config.seed) {
  if (dataset.empty()) throw PreconditionError("training dataset is empty");
  for (const auto& img : dataset) {
    if (img.width() < config.crop_size || img.height() < config.crop_size) {
      throw PreconditionError("dataset image smaller than crop_size");
    }
  }
  net.init(rng);
}

nn::TrainingState TrainingSession::state() const { return {iteration, rng.state()}; }

void TrainingSession::restore(const nn::Checkpoint& ck) {
  if (!(ck.arch == net.arch())) throw ShapeError("checkpoint architecture does not match the configuration");
  std::copy(ck.params.begin(), ck.params.end(), net.parameters().begin());
  adam.restore(ck.m, ck.v, ck.adam_steps);
  iteration = ck.state.iteration;
  rng = Rng::from_state(ck.state.rng);
}

namespace {

struct ItemResult {
  std::vector<double> grad;
  double reward = 0.0;
  double gap = 0.0;
  double anisotropy = 0.0;
};

void reward_item(const TrainingSession& s, Rng rng, ItemResult& out) {
  const auto& cfg = s.config;
  const auto& src = s.dataset[rng.uniform_index(s.dataset.size())];
  const ContoneImage c = random_crop(rng, src, cfg.crop_size);
  const NoiseMap z = gaussian_noise_map(rng, c.width(), c.height());
  const auto cache = s.net.forward(nn::make_input(c.plane(), z.plane()));
  const Plane p = nn::to_plane(cache.probabilities);

  for (std::size_t i = 0; i < p.size(); ++i) out.gap += std::abs(p[i] - std::round(p[i]));
  out.gap /= static_cast<double>(p.size());

  const auto mcfg = cfg.metric_config();
  Plane signal;
  if (cfg.levels > 2) {
    const multitone::LevelSet levels(cfg.levels);
    const auto dist = multitone::cast_probabilities(p, levels);
    const auto h = multitone::sample_multitone(dist, levels, p.width(), p.height(), rng);
    const metrics::RewardContext ctx(h.plane(), c.plane(), mcfg, s.hvs_kernel);
    out.reward = ctx.reward();
    signal = multitone::le_signal_multitone(dist, levels, p.width(), p.height(), ctx);
  } else {
    const auto h = sample_actions(p, rng);
    const metrics::RewardContext ctx(h.plane(), c.plane(), mcfg, s.hvs_kernel);
    out.reward = ctx.reward();
    switch (cfg.estimator) {
      case Estimator::local_expectation: signal = le_signal(h.plane(), ctx); break;
      case Estimator::coma: signal = coma_signal(p, h.plane(), ctx); break;
      // REINFORCE is linear in (R - b); keep the score part and scale once the batch baseline is known.
      case Estimator::reinforce:
      case Estimator::reinforce_mean_baseline: signal = reinforce_signal(p, h.plane(), 1.0, 0.0); break;
    }
  }
  out.grad.assign(s.net.parameter_count(), 0.0);
  s.net.backward(cache, nn::from_plane(signal), out.grad);
}

void anisotropy_item(const TrainingSession& s, Rng rng, const spectral::RingPartition& rings, ItemResult& out) {
  const int size = s.config.crop_size;
  const double gray = rng.uniform();
  const ContoneImage c = constant_image(gray, size, size);
  const NoiseMap z = gaussian_noise_map(rng, size, size);
  const auto cache = s.net.forward(nn::make_input(c.plane(), z.plane()));
  const Plane p = nn::to_plane(cache.probabilities);
  out.anisotropy = spectral::anisotropy_loss(p, rings);
  out.grad.assign(s.net.parameter_count(), 0.0);
  s.net.backward(cache, nn::from_plane(spectral::anisotropy_loss_backward(p, rings)), out.grad);
}

}  // namespace

StepDiagnostics train_step(TrainingSession& s) {
  const auto& cfg = s.config;
  const std::size_t nr = static_cast<std::size_t>(cfg.batch_size);
  const bool use_anisotropy = cfg.w_a > 0.0 && (cfg.levels == 2 || cfg.multitone_anisotropy);
  const std::size_t na = use_anisotropy ? static_cast<std::size_t>(cfg.effective_anisotropy_batch()) : 0;
  const std::size_t total = nr + na;

  // Child streams are split serially so results do not depend on the thread count.
  std::vector<Rng> streams;
  streams.reserve(total);
  for (std::size_t i = 0; i < total; ++i) streams.push_back(s.rng.split());

  const spectral::RingPartition rings(cfg.crop_size, cfg.crop_size);
  double bins = 1.0;
  if (cfg.anisotropy_reduction == AnisotropyReduction::mean) {
    bins = 0.0;
    for (const auto& r : rings.rings()) {
      if (r.bins.size() >= 2) bins += static_cast<double>(r.bins.size());
    }
    bins = std::max(bins, 1.0);
  }
  const bool reinforce =
      cfg.estimator == Estimator::reinforce || cfg.estimator == Estimator::reinforce_mean_baseline;
  const std::size_t count = s.net.parameter_count();
  std::vector<double> grad(count, 0.0), score_sum(count, 0.0);
  StepDiagnostics diag;

  // Bounded memory: one gradient buffer per worker, reduced in index order.
  const std::size_t chunk = static_cast<std::size_t>(std::max(1, worker_count()));
  std::vector<ItemResult> results(std::min(chunk, total));
  std::vector<double> rewards;
  for (std::size_t begin = 0; begin < total; begin += chunk) {
    const std::size_t end = std::min(total, begin + chunk);
    parallel_for(end - begin, [&](std::size_t k) {
      const std::size_t i = begin + k;
      results[k] = ItemResult{};
      if (i < nr) {
        reward_item(s, streams[i], results[k]);
      } else {
        anisotropy_item(s, streams[i], rings, results[k]);
      }
    });
    for (std::size_t i = begin; i < end; ++i) {
      const auto& r = results[i - begin];
      if (i < nr) {
        diag.mean_reward += r.reward;
        diag.binarization_gap += r.gap;
        rewards.push_back(r.reward);
        const double scale = 1.0 / static_cast<double>(nr);
        if (reinforce) {
          for (std::size_t j = 0; j < count; ++j) {
            grad[j] += scale * r.reward * r.grad[j];
            score_sum[j] += scale * r.grad[j];
          }
        } else {
          for (std::size_t j = 0; j < count; ++j) grad[j] += scale * r.grad[j];
        }
      } else {
        diag.anisotropy_loss += r.anisotropy;
        const double scale = cfg.w_a / static_cast<double>(na) / bins;
        for (std::size_t j = 0; j < count; ++j) grad[j] += scale * r.grad[j];
      }
    }
  }
  diag.mean_reward /= static_cast<double>(nr);
  diag.binarization_gap /= static_cast<double>(nr);
  if (na > 0) diag.anisotropy_loss /= static_cast<double>(na);
  if (cfg.estimator == Estimator::reinforce_mean_baseline && cfg.levels == 2) {
    for (std::size_t j = 0; j < count; ++j) grad[j] -= diag.mean_reward * score_sum[j];
  }

  const nn::CosineSchedule schedule{cfg.lr_start, cfg.lr_end, cfg.iterations};
  diag.lr = schedule.at(s.iteration);
  s.adam.step(s.net.parameters(), grad, diag.lr);
  ++s.iteration;
  return diag;
}

Plane infer_probabilities(const nn::PolicyNetwork& net, const ContoneImage& c, Rng& rng) {
  const NoiseMap z = gaussian_noise_map(rng, c.width(), c.height());
  return nn::to_plane(net.predict(nn::make_input(c.plane(), z.plane())));
}

HalftoneImage infer_halftone(const nn::PolicyNetwork& net, const ContoneImage& c, Rng& rng) {
  Plane p = infer_probabilities(net, c, rng);
  for (auto& v : p.values()) v = v >= 0.5 ? 1.0 : 0.0;
  return HalftoneImage(std::move(p));
}

}  // namespace htlab::rl
