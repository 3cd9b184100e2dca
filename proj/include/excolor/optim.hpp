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
#ifndef EXCOLOR_OPTIM_HPP
#define EXCOLOR_OPTIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "excolor/nn.hpp"

namespace excolor {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;

  void validate() const;
  bool operator==(const AdamOptions&) const = default;
};

template <typename T>
struct AdamState {
  AdamOptions options;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
  std::uint64_t t = 0;

  // Zero moments shaped like params.
  static AdamState zeros(const ParameterList<T>& params, const AdamOptions& options);
};

// One bias-corrected Adam update of a single array:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2,
//   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
// with t already incremented.
template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 std::uint64_t t, const AdamOptions& options);

// Advances state.t and updates every parameter from its accumulated
// gradient. Parameters that received no gradient are updated with g = 0.
template <typename T>
void adam_step(const ParameterList<T>& params, AdamState<T>& state);

}  // namespace excolor

#endif  // EXCOLOR_OPTIM_HPP
