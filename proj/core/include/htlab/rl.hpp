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
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "htlab/image.hpp"
#include "htlab/metrics.hpp"
#include "htlab/nn.hpp"
#include "htlab/optim.hpp"
#include "htlab/rng.hpp"

namespace htlab {
class Rng;
}

namespace htlab::rl {

enum class Estimator { reinforce, reinforce_mean_baseline, coma, local_expectation };

std::string_view estimator_name(Estimator e);
Estimator parse_estimator(std::string_view name);

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before any
/// division by p or 1 - p.
inline constexpr double kProbClamp = 1e-7;

/// Independent Bernoulli(p_a) draws, one uniform per pixel in raster order.
HalftoneImage sample_actions(const Plane& p, Rng& rng);

/// d log pi_a(h_a) / d p_a.
double log_prob_derivative(double p, double h) noexcept;

/// Per-pixel dL_MARL/dp_a for the local-expectation estimator:
/// -(R(h_a=1, h_-a) - R(h_a=0, h_-a)).
Plane le_signal(const Plane& h, const metrics::RewardModel& reward);

/// COMA estimator with counterfactual baseline b_a = sum_h' pi_a(h') R(h', h_-a).
Plane coma_signal(const Plane& p, const Plane& h, const metrics::RewardModel& reward);

/// REINFORCE with a scalar baseline.
Plane reinforce_signal(const Plane& p, const Plane& h, double reward, double baseline);

/// RewardModel over an arbitrary function of the action image, with deltas by
/// full re-evaluation. For tests and for tiny exhaustive checks.
class FunctionReward final : public metrics::RewardModel {
 public:
  using Fn = std::function<double(const Plane&)>;
  FunctionReward(Plane h, Fn fn);

  std::size_t size() const override { return h_.size(); }
  double reward() const override { return base_; }
  double value(std::size_t a) const override { return h_[a]; }
  double delta(std::size_t a, double v) const override;

 private:
  Plane h_;
  Fn fn_;
  double base_;
};

using RewardFn = std::function<double(const Plane& h)>;

inline constexpr std::size_t kMaxExactPixels = 20;

/// grad_p E_{h~pi}[R(h)] by summing over all 2^N action images. N <= 20.
Plane exact_gradient(const Plane& p, const RewardFn& reward);
/// Same, with the training reward recomputed from scratch for every h.
Plane exact_gradient(const Plane& p, const Plane& c, const metrics::Config& config);
/// E_{h~pi}[R(h)] by full enumeration.
double exact_expectation(const Plane& p, const RewardFn& reward);

/// One pixel's two candidate values, taken with probabilities (1 - q, q), where
/// dq/dx = slope for the parameter x being differentiated.
struct TwoChoice {
  double value0 = 0.0;
  double value1 = 1.0;
  double q = 0.5;
  double slope = 1.0;
};

/// Sums over all 2^N joint choices (N = width * height <= 20). Returns E[R] and,
/// when `grad` is non-null, writes dE[R]/dx per pixel.
double enumerate_two_point(int width, int height, const std::vector<TwoChoice>& choices, const RewardFn& reward,
                           Plane* grad);

/// How the anisotropy loss is reduced over frequency bins. `sum` is the plain
/// definition; `mean` divides by the number of bins that enter the loss.
enum class AnisotropyReduction { sum, mean };

std::string_view reduction_name(AnisotropyReduction r);
AnisotropyReduction parse_reduction(std::string_view name);

struct TrainConfig {
  int batch_size = 64;
  int crop_size = 64;
  std::int64_t iterations = 200000;
  double w_s = 0.06;
  double w_a = 0.002;
  double lr_start = 3e-4;
  double lr_end = 1e-5;
  Estimator estimator = Estimator::local_expectation;
  std::uint64_t seed = 0;
  /// Constant-gray images per step for the anisotropy term; 0 means batch_size.
  int anisotropy_batch = 0;
  nn::ArchConfig arch = nn::ArchConfig::full();
  hvs::Config hvs;
  /// Ink levels; 2 is binary halftoning.
  int levels = 2;
  /// Keep the anisotropy term when levels > 2.
  bool multitone_anisotropy = false;
  AnisotropyReduction anisotropy_reduction = AnisotropyReduction::sum;
  int log_every = 100;
  int checkpoint_every = 1000;

  metrics::Config metric_config() const;
  int effective_anisotropy_batch() const { return anisotropy_batch > 0 ? anisotropy_batch : batch_size; }
  void validate() const;
};

struct StepDiagnostics {
  double mean_reward = 0.0;
  double anisotropy_loss = 0.0;
  /// Mean |p - round(p)| over the reward batch.
  double binarization_gap = 0.0;
  double lr = 0.0;
};

/// Everything a training step needs that outlives it.
struct TrainingSession {
  TrainingSession(TrainConfig config, std::vector<ContoneImage> dataset);

  TrainConfig config;
  std::vector<ContoneImage> dataset;
  nn::PolicyNetwork net;
  nn::Adam adam;
  hvs::Kernel hvs_kernel;
  Rng rng;
  std::int64_t iteration = 0;

  nn::TrainingState state() const;
  void restore(const nn::Checkpoint& checkpoint);
};

/// One iteration: reward batch through the configured estimator, anisotropy
/// batch on constant grays, then a single Adam step at lr(iteration).
StepDiagnostics train_step(TrainingSession& session);

/// Threshold at 0.5 (ties to white) after one forward pass with fresh noise.
HalftoneImage infer_halftone(const nn::PolicyNetwork& net, const ContoneImage& c, Rng& rng);
/// Probability map for a contone with fresh noise.
Plane infer_probabilities(const nn::PolicyNetwork& net, const ContoneImage& c, Rng& rng);

}  // namespace htlab::rl
