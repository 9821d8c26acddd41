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
#include <span>
#include <vector>

#include "htlab/image.hpp"

namespace htlab {
class Rng;
}

namespace htlab::nn {

/// Dense NCHW tensor of doubles.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int batch, int channels, int height, int width, double fill = 0.0);

  int batch() const noexcept { return n_; }
  int channels() const noexcept { return c_; }
  int height() const noexcept { return h_; }
  int width() const noexcept { return w_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept { return static_cast<std::size_t>(h_) * w_; }

  double& operator()(int n, int c, int y, int x) { return data_[offset(n, c, y, x)]; }
  double operator()(int n, int c, int y, int x) const { return data_[offset(n, c, y, x)]; }
  double* channel(int n, int c) { return data_.data() + offset(n, c, 0, 0); }
  const double* channel(int n, int c) const { return data_.data() + offset(n, c, 0, 0); }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const Tensor& o) const noexcept {
    return n_ == o.n_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t offset(int n, int c, int y, int x) const {
    return ((static_cast<std::size_t>(n) * c_ + c) * h_ + y) * w_ + x;
  }

  int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
  std::vector<double> data_;
};

/// 3x3, stride 1, zero-pad 1 convolution (cross-correlation).
/// weights: [out][in][3][3], bias: [out].
Tensor conv2d_forward(const Tensor& x, std::span<const double> weights, std::span<const double> bias,
                      int out_channels);

/// Accumulates dL/dweights and dL/dbias, and writes dL/dx when `dx` is non-null.
void conv2d_backward(const Tensor& x, std::span<const double> weights, const Tensor& dy, Tensor* dx,
                     std::span<double> dweights, std::span<double> dbias);

double sigmoid(double x) noexcept;

struct ArchConfig {
  int channels = 32;
  int blocks = 16;

  /// Input conv + two convs per residual block + output projection.
  int conv_layers() const noexcept { return 2 + 2 * blocks; }

  static ArchConfig full() noexcept { return {32, 16}; }
  static ArchConfig mini() noexcept { return {8, 2}; }

  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

/// Residual fully-convolutional policy: conv(2->C)+ReLU, B x [conv-ReLU-conv + skip],
/// conv(C->1), sigmoid. Spatial size is preserved end to end.
class PolicyNetwork {
 public:
  struct Layer {
    int in = 0;
    int out = 0;
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;
  };

  /// Activations kept by forward() for backward().
  struct Cache {
    Tensor input;
    std::vector<Tensor> block_inputs;  // stem output, then after each block
    std::vector<Tensor> hidden;        // post-ReLU inner activation per block
    Tensor probabilities;
  };

  explicit PolicyNetwork(ArchConfig arch = ArchConfig::mini());

  const ArchConfig& arch() const noexcept { return arch_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }
  std::span<const double> weights(const Layer& l) const;
  std::span<const double> bias(const Layer& l) const;

  /// Weights ~ N(0, 0.01^2), biases zero.
  void init(Rng& rng, double stddev = 0.01);

  /// input: N x 2 x H x W (contone, noise). Returns probabilities N x 1 x H x W.
  Cache forward(const Tensor& input) const;
  Tensor predict(const Tensor& input) const;

  /// Backpropagates dL/dprobabilities and accumulates into `grads` (same layout as parameters()).
  void backward(const Cache& cache, const Tensor& dprob, std::span<double> grads) const;

 private:
  ArchConfig arch_;
  std::vector<Layer> layers_;
  std::vector<double> params_;
};

/// Stacks (c, z) into a 1 x 2 x H x W network input.
Tensor make_input(const Plane& contone, const Plane& noise);
Plane to_plane(const Tensor& t, int n = 0, int c = 0);
Tensor from_plane(const Plane& p);

}  // namespace htlab::nn
