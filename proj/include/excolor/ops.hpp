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
#ifndef EXCOLOR_OPS_HPP
#define EXCOLOR_OPS_HPP

#include <vector>

#include "excolor/tensor.hpp"

// Differentiable tensor operations. Every function here returns a fresh
// tensor and, when recording, registers its backward rule on the active tape.
namespace excolor::ops {

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> scale(const Tensor<T>& x, T c);
template <typename T>
Tensor<T> add_scalar(const Tensor<T>& x, T c);

// Subgradient 0 at the origin.
template <typename T>
Tensor<T> relu(const Tensor<T>& x);
template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& x, T alpha);
template <typename T>
Tensor<T> tanh(const Tensor<T>& x);

template <typename T>
Tensor<T> sum(const Tensor<T>& x);
template <typename T>
Tensor<T> mean(const Tensor<T>& x);

enum class PadMode { kZero, kReplicate };

struct Conv2dOptions {
  int stride = 1;
  int pad = 0;
  PadMode pad_mode = PadMode::kZero;
};

// Cross-correlation. x is [N,Ci,H,W]; w is either shared [Co,Ci,K,K] or
// per-sample [N,Co,Ci,K,K]; bias (may be undefined) is [Co]. Output spatial
// size is floor((H + 2*pad - K) / stride) + 1.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 const Conv2dOptions& opts = {});

// x [N,D], w [D,E], b [E] (may be undefined).
template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b);

template <typename T>
Tensor<T> concat_channels(const std::vector<Tensor<T>>& parts);
template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, std::int64_t begin, std::int64_t count);

template <typename T>
Tensor<T> upsample_nearest2x(const Tensor<T>& x);

// [N,C,H,W] -> [N,C]
template <typename T>
Tensor<T> avgpool_global(const Tensor<T>& x);

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape);

// Mean over elements of 0.5 d^2 (|d| < 1) or |d| - 0.5, d = a - b.
template <typename T>
Tensor<T> smooth_l1_mean(const Tensor<T>& a, const Tensor<T>& b);

// Mean over elements of |a - b|.
template <typename T>
Tensor<T> l1_mean(const Tensor<T>& a, const Tensor<T>& b);

// Fault injection for negative-control runs of the verification suite.
// When enabled, tanh reports a wrong derivative.
namespace testing {
void set_broken_tanh_backward(bool on);
bool broken_tanh_backward();
}  // namespace testing

}  // namespace excolor::ops

#endif  // EXCOLOR_OPS_HPP
