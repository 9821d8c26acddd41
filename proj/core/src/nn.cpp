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

#include "htlab/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "htlab/error.hpp"
#include "htlab/rng.hpp"

namespace htlab::nn {

Tensor::Tensor(int batch, int channels, int height, int width, double fill)
    : n_(batch), c_(channels), h_(height), w_(width) {
  if (batch <= 0 || channels <= 0 || height <= 0 || width <= 0) throw PreconditionError("tensor dimensions must be positive");
  data_.assign(static_cast<std::size_t>(batch) * channels * height * width, fill);
}

namespace {

void check_conv_shapes(const Tensor& x, std::size_t weight_count, std::size_t bias_count, int out_channels) {
  if (out_channels <= 0 || bias_count != static_cast<std::size_t>(out_channels) ||
      weight_count != static_cast<std::size_t>(out_channels) * x.channels() * 9) {
    throw ShapeError("conv2d: channel mismatch (input has " + std::to_string(x.channels()) + " channels, " +
                     std::to_string(weight_count) + " weights for " + std::to_string(out_channels) + " outputs)");
  }
}

}  // namespace

Tensor conv2d_forward(const Tensor& x, std::span<const double> weights, std::span<const double> bias,
                      int out_channels) {
  check_conv_shapes(x, weights.size(), bias.size(), out_channels);
  const int cin = x.channels(), h = x.height(), w = x.width();
  Tensor y(x.batch(), out_channels, h, w);
  for (int n = 0; n < x.batch(); ++n) {
    for (int co = 0; co < out_channels; ++co) {
      double* out = y.channel(n, co);
      std::fill(out, out + y.plane_size(), bias[co]);
      for (int ci = 0; ci < cin; ++ci) {
        const double* in = x.channel(n, ci);
        const double* k = &weights[(static_cast<std::size_t>(co) * cin + ci) * 9];
        for (int ky = 0; ky < 3; ++ky) {
          const int dy = ky - 1;
          const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
          for (int kx = 0; kx < 3; ++kx) {
            const int dx = kx - 1;
            const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
            const double kv = k[ky * 3 + kx];
            for (int yy = y0; yy < y1; ++yy) {
              double* o = out + static_cast<std::size_t>(yy) * w;
              const double* s = in + static_cast<std::size_t>(yy + dy) * w + dx;
              for (int xx = x0; xx < x1; ++xx) o[xx] += kv * s[xx];
            }
          }
        }
      }
    }
  }
  return y;
}

void conv2d_backward(const Tensor& x, std::span<const double> weights, const Tensor& dy, Tensor* dx,
                     std::span<double> dweights, std::span<double> dbias) {
  const int cout = dy.channels();
  check_conv_shapes(x, weights.size(), dbias.size(), cout);
  if (dweights.size() != weights.size()) throw ShapeError("conv2d_backward: weight gradient size mismatch");
  if (dy.batch() != x.batch() || dy.height() != x.height() || dy.width() != x.width()) {
    throw ShapeError("conv2d_backward: upstream gradient shape mismatch");
  }
  const int cin = x.channels(), h = x.height(), w = x.width();
  if (dx) *dx = Tensor(x.batch(), cin, h, w);
  for (int n = 0; n < x.batch(); ++n) {
    for (int co = 0; co < cout; ++co) {
      const double* g = dy.channel(n, co);
      double bsum = 0.0;
      for (std::size_t i = 0; i < dy.plane_size(); ++i) bsum += g[i];
      dbias[co] += bsum;
      for (int ci = 0; ci < cin; ++ci) {
        const double* in = x.channel(n, ci);
        double* din = dx ? dx->channel(n, ci) : nullptr;
        const std::size_t base = (static_cast<std::size_t>(co) * cin + ci) * 9;
        for (int ky = 0; ky < 3; ++ky) {
          const int ddy = ky - 1;
          const int y0 = std::max(0, -ddy), y1 = std::min(h, h - ddy);
          for (int kx = 0; kx < 3; ++kx) {
            const int ddx = kx - 1;
            const int x0 = std::max(0, -ddx), x1 = std::min(w, w - ddx);
            const double kv = weights[base + ky * 3 + kx];
            double acc = 0.0;
            for (int yy = y0; yy < y1; ++yy) {
              const double* gr = g + static_cast<std::size_t>(yy) * w;
              const double* s = in + static_cast<std::size_t>(yy + ddy) * w + ddx;
              for (int xx = x0; xx < x1; ++xx) acc += gr[xx] * s[xx];
              if (din) {
                double* d = din + static_cast<std::size_t>(yy + ddy) * w + ddx;
                for (int xx = x0; xx < x1; ++xx) d[xx] += kv * gr[xx];
              }
            }
            dweights[base + ky * 3 + kx] += acc;
          }
        }
      }
    }
  }
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void relu_inplace(Tensor& t) {
  for (auto& v : t.values()) v = v > 0.0 ? v : 0.0;
}

}  // namespace

PolicyNetwork::PolicyNetwork(ArchConfig arch) : arch_(arch) {
  if (arch.channels <= 0 || arch.blocks < 0) throw PreconditionError("invalid network architecture");
  std::size_t offset = 0;
  auto add = [&](int in, int out) {
    Layer l{in, out, offset, offset + static_cast<std::size_t>(in) * out * 9};
    offset = l.bias_offset + out;
    layers_.push_back(l);
  };
  add(2, arch.channels);
  for (int b = 0; b < arch.blocks; ++b) {
    add(arch.channels, arch.channels);
    add(arch.channels, arch.channels);
  }
  add(arch.channels, 1);
  params_.assign(offset, 0.0);
}

std::span<const double> PolicyNetwork::weights(const Layer& l) const {
  return std::span<const double>(params_).subspan(l.weight_offset, static_cast<std::size_t>(l.in) * l.out * 9);
}

std::span<const double> PolicyNetwork::bias(const Layer& l) const {
  return std::span<const double>(params_).subspan(l.bias_offset, l.out);
}

void PolicyNetwork::init(Rng& rng, double stddev) {
  for (const auto& l : layers_) {
    const std::size_t count = static_cast<std::size_t>(l.in) * l.out * 9;
    for (std::size_t i = 0; i < count; i += 2) {
      auto [a, b] = rng.normal_pair();
      params_[l.weight_offset + i] = stddev * a;
      if (i + 1 < count) params_[l.weight_offset + i + 1] = stddev * b;
    }
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(l.bias_offset), l.out, 0.0);
  }
}

PolicyNetwork::Cache PolicyNetwork::forward(const Tensor& input) const {
  if (input.channels() != 2) throw ShapeError("policy input must have 2 channels (contone, noise)");
  Cache cache;
  cache.input = input;
  Tensor a = conv2d_forward(input, weights(layers_[0]), bias(layers_[0]), layers_[0].out);
  relu_inplace(a);
  cache.block_inputs.push_back(a);
  for (int b = 0; b < arch_.blocks; ++b) {
    const auto& la = layers_[1 + 2 * b];
    const auto& lb = layers_[2 + 2 * b];
    Tensor u = conv2d_forward(a, weights(la), bias(la), la.out);
    relu_inplace(u);
    Tensor v = conv2d_forward(u, weights(lb), bias(lb), lb.out);
    cache.hidden.push_back(std::move(u));
    auto av = a.values();
    auto vv = v.values();
    for (std::size_t i = 0; i < av.size(); ++i) av[i] += vv[i];
    cache.block_inputs.push_back(a);
  }
  const auto& lo = layers_.back();
  Tensor p = conv2d_forward(a, weights(lo), bias(lo), lo.out);
  for (auto& v : p.values()) v = sigmoid(v);
  cache.probabilities = std::move(p);
  return cache;
}

Tensor PolicyNetwork::predict(const Tensor& input) const { return forward(input).probabilities; }

void PolicyNetwork::backward(const Cache& cache, const Tensor& dprob, std::span<double> grads) const {
  if (grads.size() != params_.size()) throw ShapeError("gradient buffer size mismatch");
  if (!dprob.same_shape(cache.probabilities)) throw ShapeError("upstream gradient shape mismatch");
  auto grad_w = [&](const Layer& l) { return grads.subspan(l.weight_offset, static_cast<std::size_t>(l.in) * l.out * 9); };
  auto grad_b = [&](const Layer& l) { return grads.subspan(l.bias_offset, l.out); };

  Tensor dlogit = dprob;
  {
    auto d = dlogit.values();
    auto p = cache.probabilities.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= p[i] * (1.0 - p[i]);
  }
  const auto& lo = layers_.back();
  Tensor da;
  conv2d_backward(cache.block_inputs.back(), weights(lo), dlogit, &da, grad_w(lo), grad_b(lo));

  for (int b = arch_.blocks - 1; b >= 0; --b) {
    const auto& la = layers_[1 + 2 * b];
    const auto& lb = layers_[2 + 2 * b];
    const Tensor& u = cache.hidden[b];
    Tensor du;
    conv2d_backward(u, weights(lb), da, &du, grad_w(lb), grad_b(lb));
    auto duv = du.values();
    auto uv = u.values();
    for (std::size_t i = 0; i < duv.size(); ++i) {
      if (uv[i] <= 0.0) duv[i] = 0.0;
    }
    Tensor da_inner;
    conv2d_backward(cache.block_inputs[b], weights(la), du, &da_inner, grad_w(la), grad_b(la));
    auto dav = da.values();
    auto div = da_inner.values();
    for (std::size_t i = 0; i < dav.size(); ++i) dav[i] += div[i];
  }

  const auto& ls = layers_.front();
  const auto a0 = cache.block_inputs.front().values();
  auto dav = da.values();
  for (std::size_t i = 0; i < dav.size(); ++i) {
    if (a0[i] <= 0.0) dav[i] = 0.0;
  }
  conv2d_backward(cache.input, weights(ls), da, nullptr, grad_w(ls), grad_b(ls));
}

Tensor make_input(const Plane& contone, const Plane& noise) {
  require_same_shape(contone, noise, "policy input");
  Tensor t(1, 2, contone.height(), contone.width());
  std::copy(contone.values().begin(), contone.values().end(), t.channel(0, 0));
  std::copy(noise.values().begin(), noise.values().end(), t.channel(0, 1));
  return t;
}

Plane to_plane(const Tensor& t, int n, int c) {
  const double* p = t.channel(n, c);
  return Plane(t.width(), t.height(), std::vector<double>(p, p + t.plane_size()));
}

Tensor from_plane(const Plane& p) {
  Tensor t(1, 1, p.height(), p.width());
  std::copy(p.values().begin(), p.values().end(), t.channel(0, 0));
  return t;
}

}  // namespace htlab::nn
