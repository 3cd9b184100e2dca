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
#ifndef EXCOLOR_TPS_HPP
#define EXCOLOR_TPS_HPP

#include <array>
#include <random>
#include <span>
#include <vector>

#include "excolor/image.hpp"

namespace excolor {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

// f(p) = affine * [x, y, 1]^T + sum_i w_i U(|p - s_i|), U(r) = r^2 log r^2.
struct TpsParams {
  std::vector<Point> source_points;
  std::vector<Point> radial_weights;
  std::array<std::array<double, 3>, 2> affine{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}};

  static TpsParams identity();
};

double tps_kernel(double r2);

// Solves [[K + reg I, P], [P^T, 0]] [w; a] = [v; 0] for both coordinates.
// The system is built on source points centred and scaled to unit extent,
// so reg acts in those units; the returned parameters are in pixels.
// Throws NumericalError when the system is singular (collinear or
// duplicated control points without regularisation).
TpsParams fit_tps(std::span<const Point> source, std::span<const Point> target, double reg = 0.0);

Point eval_tps(const TpsParams& params, const Point& p);

// Backward warp: output pixel q takes the bilinear sample of img at
// eval_tps(params, q), with coordinates clamped to the image.
RgbImage warp_image(const RgbImage& img, const TpsParams& params);

// Regular grid x grid control points spanning the image, each displaced by
// uniform offsets in [-max_offset, max_offset] times the image side. The
// fitted map goes from output coordinates to sample coordinates.
TpsParams random_tps(std::mt19937_64& rng, int grid, double max_offset, int height, int width);

}  // namespace excolor

#endif  // EXCOLOR_TPS_HPP
