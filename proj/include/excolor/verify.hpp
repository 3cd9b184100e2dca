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
#ifndef EXCOLOR_VERIFY_HPP
#define EXCOLOR_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace excolor {

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured error or margin
  double threshold = 0.0;  // pass iff value < threshold (or <= for exact checks)
  std::string detail;
};

struct VerifyOptions {
  // Negative control: run with a deliberately wrong tanh derivative.
  bool inject_fault = false;
  std::uint64_t seed = 2026;
};

// Gradient checks, colour round trips, TPS exactness, demodulation norms
// and the convolution oracle. on_result is called after each check.
std::vector<CheckResult> run_verify(const VerifyOptions& options = {},
                                    const std::function<void(const CheckResult&)>& on_result = {});

std::string format_check_row(const CheckResult& r);
std::string format_verify_table(const std::vector<CheckResult>& results);

}  // namespace excolor

#endif  // EXCOLOR_VERIFY_HPP
