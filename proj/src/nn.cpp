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
#include <cmath>

#include "excolor/nn.hpp"

namespace excolor {

template <typename T>
Tensor<T> Initializer::normal(Shape shape, double stddev, double mean, bool trainable) {
  std::normal_distribution<double> dist(mean, stddev);
  std::vector<T> values(static_cast<std::size_t>(excolor::numel(shape)));
  for (T& v : values) v = static_cast<T>(dist(rng_));
  Tensor<T> t(std::move(shape), std::move(values));
  t.set_requires_grad(trainable);
  return t;
}

template <typename T>
Tensor<T> Initializer::constant(Shape shape, double value, bool trainable) {
  Tensor<T> t(std::move(shape), static_cast<T>(value));
  t.set_requires_grad(trainable);
  return t;
}

template <typename T>
Tensor<T> modulate(const Tensor<T>& w, T s, const Tensor<T>& sigma) {
  if (!w.defined() || w.rank() != 4) {
    throw ArgumentError("modulate: weight must be [Co,Ci,K,K]");
  }
  if (!sigma.defined() || (sigma.rank() != 1 && sigma.rank() != 2)) {
    throw ArgumentError("modulate: sigma must be [Ci] or [N,Ci]");
  }
  const bool batched = sigma.rank() == 2;
  const std::int64_t n = batched ? sigma.dim(0) : 1;
  const std::int64_t co = w.dim(0);
  const std::int64_t ci = w.dim(1);
  const std::int64_t kk = w.dim(2) * w.dim(3);
  if (sigma.dim(batched ? 1 : 0) != ci) {
    throw ArgumentError("modulate: sigma length " + std::to_string(sigma.dim(batched ? 1 : 0)) +
                        " != input channels " + std::to_string(ci));
  }
  const std::size_t per_sample = static_cast<std::size_t>(co * ci * kk);
  std::vector<T> y(per_sample * n);
  const T* wv = w.values().data();
  const T* sv = sigma.values().data();
  for (std::int64_t b = 0; b < n; ++b) {
    for (std::int64_t j = 0; j < co; ++j) {
      for (std::int64_t i = 0; i < ci; ++i) {
        const T f = s * sv[b * ci + i];
        const std::size_t off = static_cast<std::size_t>((j * ci + i) * kk);
        for (std::int64_t k = 0; k < kk; ++k) y[b * per_sample + off + k] = wv[off + k] * f;
      }
    }
  }
  Shape shape = w.shape();
  if (batched) shape.insert(shape.begin(), n);
  const bool rec = autograd::recording<T>({&w, &sigma});
  Tensor<T> out = autograd::make_result<T>(std::move(shape), std::move(y), rec);
  if (rec) {
    autograd::record<T>([w, sigma, out, s, n, co, ci, kk, per_sample]() {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      const T* wv = w.values().data();
      const T* sv = sigma.values().data();
      T* gw = w.requires_grad() ? w.grad_buffer().data() : nullptr;
      T* gs = sigma.requires_grad() ? sigma.grad_buffer().data() : nullptr;
      for (std::int64_t b = 0; b < n; ++b) {
        for (std::int64_t j = 0; j < co; ++j) {
          for (std::int64_t i = 0; i < ci; ++i) {
            const std::size_t off = static_cast<std::size_t>((j * ci + i) * kk);
            const T* g = gy + b * per_sample + off;
            if (gw) {
              const T f = s * sv[b * ci + i];
              for (std::int64_t k = 0; k < kk; ++k) gw[off + k] += g[k] * f;
            }
            if (gs) {
              T acc = T(0);
              for (std::int64_t k = 0; k < kk; ++k) acc += g[k] * wv[off + k];
              gs[b * ci + i] += acc * s;
            }
          }
        }
      }
    });
  }
  return out;
}

namespace {

// Enumerates the element offsets of each normalisation group within one
// [Co,Ci,K,K] block.
template <typename F>
void for_each_group(std::int64_t co, std::int64_t ci, std::int64_t kk, DemodMode mode, F&& f) {
  std::vector<std::size_t> idx;
  if (mode == DemodMode::kPerOutputChannel) {
    idx.resize(static_cast<std::size_t>(ci * kk));
    for (std::int64_t j = 0; j < co; ++j) {
      for (std::size_t m = 0; m < idx.size(); ++m) idx[m] = static_cast<std::size_t>(j * ci * kk) + m;
      f(idx);
    }
  } else {
    idx.resize(static_cast<std::size_t>(co * kk));
    for (std::int64_t i = 0; i < ci; ++i) {
      std::size_t m = 0;
      for (std::int64_t j = 0; j < co; ++j) {
        for (std::int64_t k = 0; k < kk; ++k) idx[m++] = static_cast<std::size_t>((j * ci + i) * kk + k);
      }
      f(idx);
    }
  }
}

}  // namespace

template <typename T>
Tensor<T> demodulate(const Tensor<T>& w, T eps, DemodMode mode) {
  if (!w.defined() || (w.rank() != 4 && w.rank() != 5)) {
    throw ArgumentError("demodulate: weight must be [Co,Ci,K,K] or [N,Co,Ci,K,K]");
  }
  if (!(eps >= T(0))) throw ArgumentError("demodulate: eps must be >= 0");
  const int off = w.rank() == 5 ? 1 : 0;
  const std::int64_t n = off ? w.dim(0) : 1;
  const std::int64_t co = w.dim(off);
  const std::int64_t ci = w.dim(off + 1);
  const std::int64_t kk = w.dim(off + 2) * w.dim(off + 3);
  const std::size_t per_sample = static_cast<std::size_t>(co * ci * kk);
  const std::int64_t groups = mode == DemodMode::kPerOutputChannel ? co : ci;
  std::vector<T> y(w.values().size());
  std::vector<T> inv_norm(static_cast<std::size_t>(n * groups));
  const T* wv = w.values().data();
  for (std::int64_t b = 0; b < n; ++b) {
    const T* src = wv + b * per_sample;
    T* dst = y.data() + b * per_sample;
    std::int64_t gidx = 0;
    for_each_group(co, ci, kk, mode, [&](const std::vector<std::size_t>& idx) {
      T ss = T(0);
      for (std::size_t m : idx) ss += src[m] * src[m];
      const T denom = std::sqrt(ss + eps);
      if (denom == T(0)) {
        throw NumericalError("demodulate: zero-norm weight group with eps = 0");
      }
      const T inv = T(1) / denom;
      inv_norm[b * groups + gidx++] = inv;
      for (std::size_t m : idx) dst[m] = src[m] * inv;
    });
  }
  const bool rec = autograd::recording<T>({&w});
  Tensor<T> out = autograd::make_result<T>(w.shape(), std::move(y), rec);
  if (rec) {
    autograd::record<T>([w, out, inv_norm, n, co, ci, kk, per_sample, groups, mode]() {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      const T* wv = w.values().data();
      std::vector<T>& gw = w.grad_buffer();
      for (std::int64_t b = 0; b < n; ++b) {
        const T* x = wv + b * per_sample;
        const T* g = gy + b * per_sample;
        T* gx = gw.data() + b * per_sample;
        std::int64_t gidx = 0;
        for_each_group(co, ci, kk, mode, [&](const std::vector<std::size_t>& idx) {
          const T inv = inv_norm[b * groups + gidx++];
          T dot = T(0);
          for (std::size_t m : idx) dot += g[m] * x[m];
          const T inv3 = inv * inv * inv;
          for (std::size_t m : idx) gx[m] += g[m] * inv - x[m] * inv3 * dot;
        });
      }
    });
  }
  return out;
}

template <typename T>
Conv2d<T>::Conv2d(Initializer& init, int in_ch, int out_ch, int kernel, int stride,
                  ops::PadMode pad_mode, double gain) {
  const double fan_in = static_cast<double>(in_ch) * kernel * kernel;
  weight = init.normal<T>(Shape{out_ch, in_ch, kernel, kernel}, gain / std::sqrt(fan_in));
  bias = init.constant<T>(Shape{out_ch}, 0.0);
  options = {stride, kernel / 2, pad_mode};
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& x) const {
  return ops::conv2d(x, weight, bias, options);
}

template <typename T>
void Conv2d<T>::collect(const std::string& prefix, ParameterList<T>& out) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

template <typename T>
Linear<T>::Linear(Initializer& init, int in_dim, int out_dim, double gain, double bias_init) {
  weight = init.normal<T>(Shape{in_dim, out_dim}, gain / std::sqrt(static_cast<double>(in_dim)));
  bias = init.constant<T>(Shape{out_dim}, bias_init);
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& x) const {
  return ops::linear(x, weight, bias);
}

template <typename T>
void Linear<T>::collect(const std::string& prefix, ParameterList<T>& out) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

template <typename T>
ResBlock<T>::ResBlock(Initializer& init, int channels, int kernel, ops::PadMode pad_mode, T slope)
    : conv1(init, channels, channels, kernel, 1, pad_mode),
      conv2(init, channels, channels, kernel, 1, pad_mode),
      slope(slope) {}

template <typename T>
Tensor<T> ResBlock<T>::forward(const Tensor<T>& x) const {
  Tensor<T> h = conv1.forward(ops::leaky_relu(x, slope));
  h = conv2.forward(ops::leaky_relu(h, slope));
  return ops::add(x, h);
}

template <typename T>
void ResBlock<T>::collect(const std::string& prefix, ParameterList<T>& out) const {
  conv1.collect(prefix + ".conv1", out);
  conv2.collect(prefix + ".conv2", out);
}

template <typename T>
Mlp<T>::Mlp(Initializer& init, const std::vector<int>& dims, T slope) : slope(slope) {
  if (dims.size() < 2) throw ArgumentError("Mlp needs at least an input and an output width");
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    layers.emplace_back(init, dims[i], dims[i + 1]);
  }
}

template <typename T>
Tensor<T> Mlp<T>::forward(const Tensor<T>& x) const {
  Tensor<T> h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = layers[i].forward(h);
    if (i + 1 < layers.size()) h = ops::leaky_relu(h, slope);
  }
  return h;
}

template <typename T>
void Mlp<T>::collect(const std::string& prefix, ParameterList<T>& out) const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].collect(prefix + ".layer" + std::to_string(i), out);
  }
}

template <typename T>
Pffb<T>::Pffb(Initializer& init, const PffbOptions& opts) : options(opts) {
  if (opts.in_channels < 1 || opts.out_channels < 1 || opts.kernel < 1) {
    throw ArgumentError("Pffb: channel counts and kernel must be positive");
  }
  if (!(opts.eps >= 0.0)) throw ArgumentError("Pffb: eps must be >= 0");
  const double fan_in = static_cast<double>(opts.in_channels) * opts.kernel * opts.kernel;
  s_ = static_cast<T>(opts.s > 0.0 ? opts.s : 1.0 / std::sqrt(fan_in));
  weight = init.normal<T>(Shape{opts.out_channels, opts.in_channels, opts.kernel, opts.kernel}, 1.0);
  // Bias 1 keeps the initial modulation close to identity.
  style_map = Linear<T>(init, opts.embedding_dim, opts.in_channels, 1.0, 1.0);
  bias = init.constant<T>(Shape{opts.out_channels}, 0.0);
}

template <typename T>
Tensor<T> Pffb<T>::forward(const Tensor<T>& d, const Tensor<T>& z) const {
  return forward_with_sigma(d, style_map.forward(z));
}

template <typename T>
Tensor<T> Pffb<T>::forward_with_sigma(const Tensor<T>& d, const Tensor<T>& sigma) const {
  Tensor<T> modulated = modulate(weight, s_, sigma);
  Tensor<T> w2 = demodulate(modulated, static_cast<T>(options.eps), options.mode);
  return ops::conv2d(d, w2, bias, {1, options.kernel / 2, options.pad_mode});
}

template <typename T>
void Pffb<T>::collect(const std::string& prefix, ParameterList<T>& out) const {
  out.push_back({prefix + ".weight", weight});
  style_map.collect(prefix + ".style", out);
  out.push_back({prefix + ".bias", bias});
}

#define EXCOLOR_INSTANTIATE_NN(T)                                                     \
  template Tensor<T> Initializer::normal<T>(Shape, double, double, bool);              \
  template Tensor<T> Initializer::constant<T>(Shape, double, bool);                    \
  template Tensor<T> modulate(const Tensor<T>&, T, const Tensor<T>&);                  \
  template Tensor<T> demodulate(const Tensor<T>&, T, DemodMode);                       \
  template class Conv2d<T>;                                                            \
  template class Linear<T>;                                                            \
  template class ResBlock<T>;                                                          \
  template class Mlp<T>;                                                               \
  template class Pffb<T>;

EXCOLOR_INSTANTIATE_NN(float)
EXCOLOR_INSTANTIATE_NN(double)

#undef EXCOLOR_INSTANTIATE_NN

}  // namespace excolor
