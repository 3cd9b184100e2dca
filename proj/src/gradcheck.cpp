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
#include <algorithm>
#include <cmath>
#include <limits>

#include "excolor/gradcheck.hpp"

namespace excolor {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult grad_check(const ScalarProgram& f, const Tensor<double>& x, double eps) {
  GradCheckResult result;
  double min_distance = std::numeric_limits<double>::infinity();

  Tensor<double> leaf = x.detach();
  leaf.set_requires_grad(true);
  std::vector<double> analytic;
  {
    NonSmoothMonitor monitor;
    Tape<double> tape;
    TapeScope<double> scope(tape);
    Tensor<double> y = f(leaf);
    if (y.requires_grad()) tape.backward(y);
    min_distance = std::min(min_distance, monitor.min_distance());
    if (leaf.has_grad()) {
      analytic.assign(leaf.grad().begin(), leaf.grad().end());
    } else {
      analytic.assign(static_cast<std::size_t>(leaf.numel()), 0.0);
    }
  }

  std::vector<double> base(x.values().begin(), x.values().end());
  auto evaluate = [&](std::size_t i, double delta) {
    std::vector<double> v = base;
    v[i] += delta;
    NonSmoothMonitor monitor;
    double value = f(Tensor<double>(x.shape(), std::move(v))).item();
    min_distance = std::min(min_distance, monitor.min_distance());
    return value;
  };

  for (std::size_t i = 0; i < base.size(); ++i) {
    const double numeric = (evaluate(i, eps) - evaluate(i, -eps)) / (2.0 * eps);
    const double err = relative_error(analytic[i], numeric);
    if (err > result.max_rel_error) {
      result.max_rel_error = err;
      result.worst_index = i;
    }
  }
  result.min_nonsmooth_distance = min_distance;
  return result;
}

}  // namespace excolor
