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
#include <string>

#include "excolor/optim.hpp"

namespace excolor {

void AdamOptions::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("optim.lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("optim.beta1 must lie in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("optim.beta2 must lie in [0,1)");
  if (!(eps >= 0.0)) throw ConfigError("optim.eps must be >= 0");
}

template <typename T>
AdamState<T> AdamState<T>::zeros(const ParameterList<T>& params, const AdamOptions& options) {
  AdamState state;
  state.options = options;
  for (const NamedTensor<T>& p : params) {
    state.m.emplace_back(static_cast<std::size_t>(p.tensor.numel()), T(0));
    state.v.emplace_back(static_cast<std::size_t>(p.tensor.numel()), T(0));
  }
  return state;
}

template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 std::uint64_t t, const AdamOptions& options) {
  if (param.size() != m.size() || param.size() != v.size() ||
      (!grad.empty() && grad.size() != param.size())) {
    throw ArgumentError("adam_update: parameter, gradient and moment sizes differ");
  }
  if (t == 0) throw ArgumentError("adam_update: step counter must be >= 1");
  const double b1 = options.beta1;
  const double b2 = options.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad.empty() ? 0.0 : static_cast<double>(grad[i]);
    const double mi = b1 * m[i] + (1.0 - b1) * g;
    const double vi = b2 * v[i] + (1.0 - b2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    const double update = options.lr * (mi / c1) / (std::sqrt(vi / c2) + options.eps);
    param[i] = static_cast<T>(param[i] - update);
  }
}

template <typename T>
void adam_step(const ParameterList<T>& params, AdamState<T>& state) {
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw ArgumentError("adam_step: optimizer state does not match the parameter list");
  }
  state.t += 1;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor<T> p = params[i].tensor;
    std::span<const T> g = p.has_grad() ? p.grad() : std::span<const T>();
    if (state.m[i].size() != static_cast<std::size_t>(p.numel())) {
      throw ArgumentError("adam_step: moment shape mismatch for " + params[i].name);
    }
    adam_update<T>(p.mutable_values(), g, state.m[i], state.v[i], state.t, state.options);
  }
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_update<float>(std::span<float>, std::span<const float>, std::span<float>,
                                 std::span<float>, std::uint64_t, const AdamOptions&);
template void adam_update<double>(std::span<double>, std::span<const double>, std::span<double>,
                                  std::span<double>, std::uint64_t, const AdamOptions&);
template void adam_step<float>(const ParameterList<float>&, AdamState<float>&);
template void adam_step<double>(const ParameterList<double>&, AdamState<double>&);

}  // namespace excolor
