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
#ifndef EXCOLOR_GRADCHECK_HPP
#define EXCOLOR_GRADCHECK_HPP

#include <functional>

#include "excolor/tensor.hpp"

namespace excolor {

// A scalar-valued program of one tensor argument.
using ScalarProgram = std::function<Tensor<double>(const Tensor<double>&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  // Closest approach to a non-differentiable point over the base evaluation
  // and every perturbed one. Inputs closer than the perturbation itself are
  // not meaningful checks.
  double min_nonsmooth_distance = 0.0;
};

// |a - n| / max(|a|, |n|, 1e-8)
double relative_error(double analytic, double numeric);

// Compares reverse-mode gradients of f at x against central differences
// (f(x + eps e_i) - f(x - eps e_i)) / 2 eps over every coordinate of x.
GradCheckResult grad_check(const ScalarProgram& f, const Tensor<double>& x, double eps = 1e-5);

}  // namespace excolor

#endif  // EXCOLOR_GRADCHECK_HPP
