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
#ifndef EXCOLOR_BENCH_HPP
#define EXCOLOR_BENCH_HPP

#include <string>
#include <vector>

#include "excolor/model.hpp"

namespace excolor {

struct BenchRow {
  int size = 0;
  double median_ms = 0.0;
  std::vector<double> samples_ms;
  bool ok = true;
  std::string error;  // set when the run could not allocate or failed
};

// Median wall-clock time of `repeats` colorize calls per size, on synthetic
// inputs, with the model weights reused at each resolution.
std::vector<BenchRow> run_bench(const ColorizationModel<float>& model, const std::vector<int>& sizes,
                                int repeats = 5);

std::string format_bench_report(const std::vector<BenchRow>& rows);

}  // namespace excolor

#endif  // EXCOLOR_BENCH_HPP
