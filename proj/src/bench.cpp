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
#include <chrono>
#include <cstdio>
#include <new>
#include <sstream>

#include "excolor/augment.hpp"
#include "excolor/bench.hpp"
#include "excolor/synth.hpp"

namespace excolor {

std::vector<BenchRow> run_bench(const ColorizationModel<float>& model, const std::vector<int>& sizes,
                                int repeats) {
  if (repeats < 1) throw ArgumentError("bench needs at least one repeat");
  std::vector<BenchRow> rows;
  for (int size : sizes) {
    BenchRow row;
    row.size = size;
    try {
      ColorizationModel<float> scaled = model.with_input_size(size);
      const std::vector<RgbImage> images = synthetic_dataset(2, size, 99);
      const GrayImage target = make_target(images[0]);
      for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        RgbImage out = colorize(scaled, target, images[1]);
        const auto stop = std::chrono::steady_clock::now();
        row.samples_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
      }
      std::vector<double> sorted = row.samples_ms;
      std::sort(sorted.begin(), sorted.end());
      row.median_ms = sorted[sorted.size() / 2];
    } catch (const std::bad_alloc&) {
      row.ok = false;
      row.error = "out of memory";
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_bench_report(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "colorize latency, single CPU process (not comparable to GPU timings)\n";
  os << "size        median_ms   samples\n";
  for (const BenchRow& r : rows) {
    char buf[128];
    if (!r.ok) {
      std::snprintf(buf, sizeof buf, "%4dx%-4d   error: %s\n", r.size, r.size, r.error.c_str());
      os << buf;
      continue;
    }
    std::snprintf(buf, sizeof buf, "%4dx%-4d %11.1f   ", r.size, r.size, r.median_ms);
    os << buf;
    for (std::size_t i = 0; i < r.samples_ms.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.1f", i ? " " : "", r.samples_ms[i]);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace excolor
