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
#include <sstream>

#include "excolor/error.hpp"
#include "excolor/tps.hpp"

namespace excolor {

namespace {

// Dense row-major system solved in place by Gaussian elimination with
// partial pivoting. rhs holds `cols` right-hand sides.
void solve_in_place(std::vector<double>& a, std::vector<double>& rhs, int n, int cols) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  const double tiny = std::max(scale, 1.0) * 1e-12;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (std::abs(a[pivot * n + col]) <= tiny) {
      std::ostringstream msg;
      msg << "TPS system is singular (pivot " << a[pivot * n + col] << " at column " << col
          << " of " << n << "); control points may be duplicated or collinear";
      throw NumericalError(msg.str());
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      for (int c = 0; c < cols; ++c) std::swap(rhs[col * cols + c], rhs[pivot * cols + c]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] / a[col * n + col];
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
      for (int c = 0; c < cols; ++c) rhs[r * cols + c] -= factor * rhs[col * cols + c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    for (int c = 0; c < cols; ++c) {
      double acc = rhs[r * cols + c];
      for (int k = r + 1; k < n; ++k) acc -= a[r * n + k] * rhs[k * cols + c];
      rhs[r * cols + c] = acc / a[r * n + r];
    }
  }
}

bool all_collinear(std::span<const Point> pts) {
  double extent = 0.0;
  for (const Point& p : pts) {
    extent = std::max({extent, std::abs(p.x - pts[0].x), std::abs(p.y - pts[0].y)});
  }
  if (extent == 0.0) return true;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double cross = (pts[i].x - pts[0].x) * (pts[j].y - pts[0].y) -
                     (pts[i].y - pts[0].y) * (pts[j].x - pts[0].x);
      if (std::abs(cross) > 1e-9 * extent * extent) return false;
    }
  }
  return true;
}

// Sample positions this close to a pixel centre are treated as exact.
constexpr double kSnap = 1e-7;

double snap(double v) {
  double r = std::round(v);
  return std::abs(v - r) < kSnap ? r : v;
}

}  // namespace

TpsParams TpsParams::identity() { return TpsParams{}; }

double tps_kernel(double r2) { return r2 > 0.0 ? r2 * std::log(r2) : 0.0; }

TpsParams fit_tps(std::span<const Point> source, std::span<const Point> target, double reg) {
  if (source.size() != target.size()) {
    throw ArgumentError("fit_tps: source and target point counts differ");
  }
  if (source.size() < 3) {
    throw ArgumentError("fit_tps: at least 3 control points are required");
  }
  if (reg < 0.0 || !std::isfinite(reg)) {
    throw ArgumentError("fit_tps: regularisation must be finite and >= 0");
  }
  if (all_collinear(source)) {
    throw NumericalError("fit_tps: source control points are collinear; the affine part is "
                         "undetermined");
  }
  // Fit in centred, unit-extent coordinates so the conditioning does not
  // depend on the image size, then map the solution back to pixel units.
  const int n = static_cast<int>(source.size());
  Point centre;
  for (const Point& p : source) {
    centre.x += p.x / n;
    centre.y += p.y / n;
  }
  double extent = 0.0;
  for (const Point& p : source) extent = std::max({extent, std::abs(p.x - centre.x), std::abs(p.y - centre.y)});
  std::vector<Point> unit(source.size());
  for (int i = 0; i < n; ++i) unit[i] = {(source[i].x - centre.x) / extent, (source[i].y - centre.y) / extent};

  const int m = n + 3;
  std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(m) * 2, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dx = unit[i].x - unit[j].x;
      double dy = unit[i].y - unit[j].y;
      a[i * m + j] = tps_kernel(dx * dx + dy * dy);
    }
    a[i * m + i] += reg;
    const double row[3] = {unit[i].x, unit[i].y, 1.0};
    for (int k = 0; k < 3; ++k) {
      a[i * m + n + k] = row[k];
      a[(n + k) * m + i] = row[k];
    }
    rhs[i * 2] = target[i].x;
    rhs[i * 2 + 1] = target[i].y;
  }
  solve_in_place(a, rhs, m, 2);

  // U(r / e) = U(r) / e^2 - (2 log e / e^2) r^2, and with sum w = 0 and
  // sum w s = 0 the r^2 terms collapse to the constant sum w |s|^2.
  const double e2 = extent * extent;
  const double log_term = 2.0 * std::log(extent) / e2;
  TpsParams params;
  params.source_points.assign(source.begin(), source.end());
  params.radial_weights.resize(source.size());
  for (int d = 0; d < 2; ++d) {
    double constant = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = rhs[i * 2 + d];
      (d == 0 ? params.radial_weights[i].x : params.radial_weights[i].y) = w / e2;
      const double qx = source[i].x - centre.x, qy = source[i].y - centre.y;
      constant += w * (qx * qx + qy * qy);
    }
    const double ax = rhs[n * 2 + d] / extent, ay = rhs[(n + 1) * 2 + d] / extent;
    params.affine[d][0] = ax;
    params.affine[d][1] = ay;
    params.affine[d][2] = rhs[(n + 2) * 2 + d] - ax * centre.x - ay * centre.y - log_term * constant;
  }
  return params;
}

Point eval_tps(const TpsParams& params, const Point& p) {
  Point out{params.affine[0][0] * p.x + params.affine[0][1] * p.y + params.affine[0][2],
            params.affine[1][0] * p.x + params.affine[1][1] * p.y + params.affine[1][2]};
  for (std::size_t i = 0; i < params.source_points.size(); ++i) {
    double dx = p.x - params.source_points[i].x;
    double dy = p.y - params.source_points[i].y;
    double u = tps_kernel(dx * dx + dy * dy);
    out.x += params.radial_weights[i].x * u;
    out.y += params.radial_weights[i].y * u;
  }
  return out;
}

RgbImage warp_image(const RgbImage& img, const TpsParams& params) {
  const int h = img.height();
  const int w = img.width();
  RgbImage out(h, w);
  if (h == 0 || w == 0) return out;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Point s = eval_tps(params, Point{static_cast<double>(x), static_cast<double>(y)});
      double sx = std::clamp(snap(s.x), 0.0, static_cast<double>(w - 1));
      double sy = std::clamp(snap(s.y), 0.0, static_cast<double>(h - 1));
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      int x1 = std::min(x0 + 1, w - 1);
      int y1 = std::min(y0 + 1, h - 1);
      double fx = sx - x0;
      double fy = sy - y0;
      for (int c = 0; c < 3; ++c) {
        double v;
        if (fx == 0.0 && fy == 0.0) {
          v = img.at(y0, x0, c);
        } else {
          double top = img.at(y0, x0, c) * (1.0 - fx) + img.at(y0, x1, c) * fx;
          double bottom = img.at(y1, x0, c) * (1.0 - fx) + img.at(y1, x1, c) * fx;
          v = top * (1.0 - fy) + bottom * fy;
        }
        out.at(y, x, c) = static_cast<float>(v);
      }
    }
  }
  return out;
}

TpsParams random_tps(std::mt19937_64& rng, int grid, double max_offset, int height, int width) {
  if (grid < 2) throw ArgumentError("random_tps: grid must be >= 2");
  if (!(max_offset >= 0.0 && max_offset < 0.5)) {
    throw ArgumentError("random_tps: max_offset must lie in [0, 0.5)");
  }
  if (height < 2 || width < 2) throw ArgumentError("random_tps: image too small");
  if (max_offset == 0.0) return TpsParams::identity();
  std::uniform_real_distribution<double> offset(-max_offset, max_offset);
  std::vector<Point> source;
  std::vector<Point> target;
  for (int gy = 0; gy < grid; ++gy) {
    for (int gx = 0; gx < grid; ++gx) {
      Point s{gx * (width - 1.0) / (grid - 1), gy * (height - 1.0) / (grid - 1)};
      double dx = offset(rng) * width;
      double dy = offset(rng) * height;
      source.push_back(s);
      target.push_back({s.x + dx, s.y + dy});
    }
  }
  return fit_tps(source, target, 0.0);
}

}  // namespace excolor
