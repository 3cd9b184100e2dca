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
#include <sstream>

#include "excolor/tensor.hpp"

namespace excolor {

namespace {
thread_local NonSmoothMonitor* g_monitor = nullptr;

template <typename T>
void check_finite_impl(std::span<const T> values) {
  for (T v : values) {
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite value produced by tensor operation");
    }
  }
}
}  // namespace

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    os << (i ? "," : "") << shape[i];
  }
  os << "]";
  return os.str();
}

NonSmoothMonitor::NonSmoothMonitor() : previous_(g_monitor) { g_monitor = this; }
NonSmoothMonitor::~NonSmoothMonitor() { g_monitor = previous_; }
NonSmoothMonitor* NonSmoothMonitor::current() { return g_monitor; }

namespace autograd {
void check_finite(std::span<const float> values) { check_finite_impl(values); }
void check_finite(std::span<const double> values) { check_finite_impl(values); }
}  // namespace autograd

}  // namespace excolor
