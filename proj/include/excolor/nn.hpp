/**
 * Copyright 2026 The excolor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef EXCOLOR_NN_HPP
#define EXCOLOR_NN_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "excolor/ops.hpp"
#include "excolor/tensor.hpp"

namespace excolor {

template <typename T>
struct NamedTensor {
  std::string name;
  Tensor<T> tensor;
};

template <typename T>
using ParameterList = std::vector<NamedTensor<T>>;

// Seeded weight source. Values are drawn in double precision and cast, so a
// float and a double network built from the same seed hold the same weights
// up to rounding.
class Initializer {
 public:
  explicit Initializer(std::uint64_t seed) : rng_(seed) {}

  template <typename T>
  Tensor<T> normal(Shape shape, double stddev, double mean = 0.0, bool trainable = true);

  template <typename T>
  Tensor<T> constant(Shape shape, double value, bool trainable = true);

 private:
  std::mt19937_64 rng_;
};

enum class DemodMode {
  // Sum over (input channel, ky, kx) for each output channel.
  kPerOutputChannel,
  // Sum over (output channel, ky, kx) for each input channel.
  kPerInputChannel,
};

// w [Co,Ci,K,K]; sigma [Ci] gives [Co,Ci,K,K], sigma [N,Ci] gives per-sample
// weights [N,Co,Ci,K,K]. w'[.., j, i, ky, kx] = w[j, i, ky, kx] * s * sigma[.., i].
template <typename T>
Tensor<T> modulate(const Tensor<T>& w, T s, const Tensor<T>& sigma);

// w'' = w' / sqrt(sum w'^2 + eps) over the groups selected by mode. Works on
// shared [Co,Ci,K,K] and per-sample [N,Co,Ci,K,K] weights.
template <typename T>
Tensor<T> demodulate(const Tensor<T>& w, T eps, DemodMode mode = DemodMode::kPerOutputChannel);

template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(Initializer& init, int in_ch, int out_ch, int kernel, int stride, ops::PadMode pad_mode,
         double gain = std::sqrt(2.0));

  Tensor<T> forward(const Tensor<T>& x) const;
  void collect(const std::string& prefix, ParameterList<T>& out) const;

  Tensor<T> weight;
  Tensor<T> bias;
  ops::Conv2dOptions options;
};

template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(Initializer& init, int in_dim, int out_dim, double gain = std::sqrt(2.0),
         double bias_init = 0.0);

  Tensor<T> forward(const Tensor<T>& x) const;
  void collect(const std::string& prefix, ParameterList<T>& out) const;

  Tensor<T> weight;  // [in, out]
  Tensor<T> bias;    // [out]
};

// x + conv2(act(conv1(act(x))))
template <typename T>
class ResBlock {
 public:
  ResBlock() = default;
  ResBlock(Initializer& init, int channels, int kernel, ops::PadMode pad_mode, T slope);

  Tensor<T> forward(const Tensor<T>& x) const;
  void collect(const std::string& prefix, ParameterList<T>& out) const;

  Conv2d<T> conv1;
  Conv2d<T> conv2;
  T slope = T(0.2);
};

// Linear layers with leaky ReLU between them; the last layer is linear.
template <typename T>
class Mlp {
 public:
  Mlp() = default;
  Mlp(Initializer& init, const std::vector<int>& dims, T slope);

  Tensor<T> forward(const Tensor<T>& x) const;
  void collect(const std::string& prefix, ParameterList<T>& out) const;

  std::vector<Linear<T>> layers;
  T slope = T(0.2);
};

struct PffbOptions {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 3;
  int embedding_dim = 512;
  double eps = 1e-8;
  // Non-positive selects 1 / sqrt(in_channels * kernel^2).
  double s = 0.0;
  DemodMode mode = DemodMode::kPerOutputChannel;
  ops::PadMode pad_mode = ops::PadMode::kReplicate;
};

// Progressive feature formalisation block: the colour embedding is mapped
// to per-input-channel scales that modulate the convolution weights, which
// are then demodulated before convolving the content features.
template <typename T>
class Pffb {
 public:
  Pffb() = default;
  Pffb(Initializer& init, const PffbOptions& opts);

  // sigma = style_map(z), then forward_with_sigma.
  Tensor<T> forward(const Tensor<T>& d, const Tensor<T>& z) const;
  // conv2d(d, demodulate(modulate(w, s, sigma), eps)) + bias
  Tensor<T> forward_with_sigma(const Tensor<T>& d, const Tensor<T>& sigma) const;
  void collect(const std::string& prefix, ParameterList<T>& out) const;

  T s() const { return s_; }

  Tensor<T> weight;  // [Co,Ci,K,K]
  Linear<T> style_map;
  Tensor<T> bias;  // [Co]
  PffbOptions options;

 private:
  T s_ = T(1);
};

}  // namespace excolor

#endif  // EXCOLOR_NN_HPP
