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
#ifndef EXCOLOR_TESTS_ORACLES_HPP
#define EXCOLOR_TESTS_ORACLES_HPP

// Reference implementations written independently of the library code so
// that tests compare against something other than the code under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "excolor/tensor.hpp"

namespace oracle {

// Six nested loops, cross-correlation. w is [Co,Ci,K,K] or per-sample
// [N,Co,Ci,K,K]; replicate clamps out-of-range taps to the border.
template <typename T>
std::vector<double> conv2d(const excolor::Tensor<T>& x, const excolor::Tensor<T>& w,
                           const excolor::Tensor<T>* bias, int stride, int pad, bool replicate,
                           std::int64_t& ho, std::int64_t& wo) {
  const std::int64_t n = x.dim(0), ci = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const bool per_sample = w.rank() == 5;
  const std::int64_t co = per_sample ? w.dim(1) : w.dim(0);
  const std::int64_t k = w.dim(w.rank() - 1);
  ho = (h + 2 * pad - k) / stride + 1;
  wo = (wd + 2 * pad - k) / stride + 1;
  std::vector<double> out(static_cast<std::size_t>(n * co * ho * wo));
  for (std::int64_t b = 0; b < n; ++b)
    for (std::int64_t o = 0; o < co; ++o)
      for (std::int64_t y = 0; y < ho; ++y)
        for (std::int64_t xx = 0; xx < wo; ++xx) {
          double acc = bias ? static_cast<double>(bias->values()[o]) : 0.0;
          for (std::int64_t i = 0; i < ci; ++i)
            for (std::int64_t u = 0; u < k; ++u)
              for (std::int64_t v = 0; v < k; ++v) {
                std::int64_t sy = y * stride + u - pad;
                std::int64_t sx = xx * stride + v - pad;
                if (replicate) {
                  sy = std::min(std::max<std::int64_t>(sy, 0), h - 1);
                  sx = std::min(std::max<std::int64_t>(sx, 0), wd - 1);
                } else if (sy < 0 || sx < 0 || sy >= h || sx >= wd) {
                  continue;
                }
                const double wv = per_sample
                                      ? w.values()[(((b * co + o) * ci + i) * k + u) * k + v]
                                      : w.values()[((o * ci + i) * k + u) * k + v];
                acc += wv * x.values()[((b * ci + i) * h + sy) * wd + sx];
              }
          out[((b * co + o) * ho + y) * wo + xx] = acc;
        }
  return out;
}

// Row-major [N,D] x [D,E] + b.
inline std::vector<double> matmul(const std::vector<double>& x, const std::vector<double>& w,
                                  const std::vector<double>& b, int n, int d, int e) {
  std::vector<double> out(static_cast<std::size_t>(n * e));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < e; ++c) {
      double acc = b.empty() ? 0.0 : b[c];
      for (int k = 0; k < d; ++k) acc += x[r * d + k] * w[k * e + c];
      out[r * e + c] = acc;
    }
  return out;
}

// sRGB -> XYZ (D65) -> CIE Lab using the published constants:
// epsilon = 216/24389, kappa = 24389/27 and the D65 white (0.95047, 1, 1.08883).
inline std::array<double, 3> srgb_to_lab(double r, double g, double b) {
  auto lin = [](double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double R = lin(r), G = lin(g), B = lin(b);
  const double X = 0.4124564 * R + 0.3575761 * G + 0.1804375 * B;
  const double Y = 0.2126729 * R + 0.7151522 * G + 0.0721750 * B;
  const double Z = 0.0193339 * R + 0.1191920 * G + 0.9503041 * B;
  const double eps = 216.0 / 24389.0;
  const double kappa = 24389.0 / 27.0;
  auto f = [&](double t) { return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0; };
  const double fx = f(X / 0.95047), fy = f(Y / 1.0), fz = f(Z / 1.08883);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

// Central differences of a scalar function of a flat vector.
inline std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double eps) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + eps;
    const double up = f(x);
    x[i] = keep - eps;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * eps);
  }
  return g;
}

inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::max({std::abs(a[i]), std::abs(n[i]), 1e-8});
    worst = std::max(worst, std::abs(a[i] - n[i]) / d);
  }
  return worst;
}

template <typename T>
excolor::Tensor<T> random_tensor(std::mt19937_64& rng, excolor::Shape shape, double stddev = 1.0,
                                 double mean = 0.0) {
  std::normal_distribution<double> d(mean, stddev);
  std::vector<T> v(static_cast<std::size_t>(excolor::numel(shape)));
  for (T& x : v) x = static_cast<T>(d(rng));
  return excolor::Tensor<T>(std::move(shape), std::move(v));
}

}  // namespace oracle

#endif  // EXCOLOR_TESTS_ORACLES_HPP
