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

#include <Eigen/Dense>

#include "excolor/colorspace.hpp"
#include "excolor/error.hpp"

namespace excolor {

namespace {

// Linear sRGB -> XYZ (D65).
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

constexpr double kDelta = 6.0 / 29.0;
constexpr double kGammaBreakEncoded = 0.04045;
constexpr double kGammaBreakLinear = 0.0031308;

struct Constants {
  double white[3];
  double xyz_to_rgb[3][3];

  Constants() {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
      white[i] = 0.0;
      for (int j = 0; j < 3; ++j) {
        m(i, j) = kRgbToXyz[i][j];
        // The white point is the image of (1,1,1) so neutral greys map to
        // a = b = 0 without residue.
        white[i] += kRgbToXyz[i][j];
      }
    }
    Eigen::Matrix3d inv = m.inverse();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) xyz_to_rgb[i][j] = inv(i, j);
    }
  }
};

const Constants& constants() {
  static const Constants c;
  return c;
}

double srgb_to_linear(double c) {
  return c <= kGammaBreakEncoded ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

// Value and derivative of the inverse companding functions.
struct ValueSlope {
  double value;
  double slope;
};

ValueSlope lab_finv(double t) {
  if (t > kDelta) return {t * t * t, 3.0 * t * t};
  return {3.0 * kDelta * kDelta * (t - 4.0 / 29.0), 3.0 * kDelta * kDelta};
}

ValueSlope linear_to_srgb(double v) {
  if (v <= kGammaBreakLinear) return {12.92 * v, 12.92};
  double p = std::pow(v, 1.0 / 2.4);
  return {1.055 * p - 0.055, 1.055 / 2.4 * p / v};
}

// RGB (clamped) and d(rgb)/d(L,a,b) for one pixel. Reports distance to the
// nearest non-smooth point to an active monitor.
struct PixelJacobian {
  double rgb[3];
  double jac[3][3];
};

PixelJacobian lab_to_rgb_with_jacobian(double L, double a, double b, bool want_jacobian,
                                       NonSmoothMonitor* monitor) {
  const Constants& k = constants();
  const double fy = (L + 16.0) / 116.0;
  const double f[3] = {fy + a / 500.0, fy, fy - b / 200.0};
  // d f_i / d(L,a,b)
  const double df[3][3] = {
      {1.0 / 116.0, 1.0 / 500.0, 0.0},
      {1.0 / 116.0, 0.0, 0.0},
      {1.0 / 116.0, 0.0, -1.0 / 200.0},
  };
  double xyz[3];
  double dxyz[3][3];
  for (int i = 0; i < 3; ++i) {
    ValueSlope fi = lab_finv(f[i]);
    xyz[i] = k.white[i] * fi.value;
    for (int j = 0; j < 3; ++j) dxyz[i][j] = k.white[i] * fi.slope * df[i][j];
    if (monitor) monitor->note(std::abs(f[i] - kDelta));
  }
  PixelJacobian out{};
  for (int c = 0; c < 3; ++c) {
    double lin = 0.0;
    double dlin[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      lin += k.xyz_to_rgb[c][i] * xyz[i];
      for (int j = 0; j < 3; ++j) dlin[j] += k.xyz_to_rgb[c][i] * dxyz[i][j];
    }
    ValueSlope s = linear_to_srgb(lin);
    if (monitor) {
      monitor->note(std::abs(lin - kGammaBreakLinear));
      monitor->note(std::abs(s.value));
      monitor->note(std::abs(s.value - 1.0));
    }
    const bool clamped = s.value < 0.0 || s.value > 1.0;
    out.rgb[c] = std::clamp(s.value, 0.0, 1.0);
    if (want_jacobian) {
      for (int j = 0; j < 3; ++j) out.jac[c][j] = clamped ? 0.0 : s.slope * dlin[j];
    }
  }
  return out;
}

}  // namespace

Lab rgb_to_lab(const Rgb& rgb) {
  const Constants& k = constants();
  const double lin[3] = {srgb_to_linear(rgb.r), srgb_to_linear(rgb.g), srgb_to_linear(rgb.b)};
  double f[3];
  for (int i = 0; i < 3; ++i) {
    double v = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
    f[i] = lab_f(v / k.white[i]);
  }
  return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

namespace {

bool in_gamut(const Lab& lab) {
  const Constants& k = constants();
  const double fy = (lab.L + 16.0) / 116.0;
  const double f[3] = {fy + lab.a / 500.0, fy, fy - lab.b / 200.0};
  double xyz[3];
  for (int i = 0; i < 3; ++i) xyz[i] = k.white[i] * lab_finv(f[i]).value;
  for (int c = 0; c < 3; ++c) {
    double lin = 0.0;
    for (int i = 0; i < 3; ++i) lin += k.xyz_to_rgb[c][i] * xyz[i];
    const double v = linear_to_srgb(lin).value;
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

}  // namespace

Lab fit_chroma_to_gamut(const Lab& lab) {
  if (in_gamut(lab)) return lab;
  const Lab gray{std::clamp(lab.L, 0.0, 100.0), 0.0, 0.0};
  if (!in_gamut(gray)) return gray;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 48; ++it) {
    const double mid = 0.5 * (lo + hi);
    (in_gamut({gray.L, mid * lab.a, mid * lab.b}) ? lo : hi) = mid;
  }
  return {gray.L, lo * lab.a, lo * lab.b};
}

Rgb lab_to_rgb(const Lab& lab) {
  PixelJacobian p = lab_to_rgb_with_jacobian(lab.L, lab.a, lab.b, false, nullptr);
  return {p.rgb[0], p.rgb[1], p.rgb[2]};
}

LabImage rgb_to_lab(const RgbImage& img) {
  LabImage out;
  out.height = img.height();
  out.width = img.width();
  const std::size_t n = img.pixel_count();
  out.L.resize(n);
  out.a.resize(n);
  out.b.resize(n);
  std::span<const float> d = img.data();
  for (std::size_t p = 0; p < n; ++p) {
    Lab lab = rgb_to_lab(Rgb{d[3 * p], d[3 * p + 1], d[3 * p + 2]});
    out.L[p] = static_cast<float>(lab.L);
    out.a[p] = static_cast<float>(lab.a);
    out.b[p] = static_cast<float>(lab.b);
  }
  return out;
}

RgbImage lab_to_rgb(const LabImage& img) {
  const std::size_t n = static_cast<std::size_t>(img.height) * img.width;
  if (img.L.size() != n || img.a.size() != n || img.b.size() != n) {
    throw ArgumentError("LabImage channels do not match its dimensions");
  }
  std::vector<float> data(n * 3);
  for (std::size_t p = 0; p < n; ++p) {
    Rgb rgb = lab_to_rgb(Lab{img.L[p], img.a[p], img.b[p]});
    data[3 * p] = static_cast<float>(rgb.r);
    data[3 * p + 1] = static_cast<float>(rgb.g);
    data[3 * p + 2] = static_cast<float>(rgb.b);
  }
  return RgbImage(img.height, img.width, std::move(data));
}

LabImage compose_lab(const GrayImage& L, const AbPlanes& ab) {
  const std::size_t n = L.pixel_count();
  if (L.height() != ab.height || L.width() != ab.width || ab.a.size() != n || ab.b.size() != n) {
    throw ArgumentError("compose_lab: luminance and chrominance dimensions differ");
  }
  LabImage out;
  out.height = L.height();
  out.width = L.width();
  out.L.assign(L.data().begin(), L.data().end());
  out.a = ab.a;
  out.b = ab.b;
  return out;
}

GrayImage lab_luminance(const LabImage& img) { return GrayImage(img.height, img.width, img.L); }

AbPlanes lab_chrominance(const LabImage& img) { return {img.height, img.width, img.a, img.b}; }

template <typename T>
Tensor<T> lab_to_rgb(const Tensor<T>& L, const Tensor<T>& ab) {
  if (!L.defined() || !ab.defined() || L.rank() != 4 || ab.rank() != 4 || L.dim(1) != 1 ||
      ab.dim(1) != 2 || L.dim(0) != ab.dim(0) || L.dim(2) != ab.dim(2) || L.dim(3) != ab.dim(3)) {
    throw ArgumentError("lab_to_rgb: expected L [N,1,H,W] and ab [N,2,H,W]");
  }
  const std::int64_t n = L.dim(0);
  const std::size_t plane = static_cast<std::size_t>(L.dim(2) * L.dim(3));
  std::vector<T> y(static_cast<std::size_t>(n) * 3 * plane);
  NonSmoothMonitor* monitor = NonSmoothMonitor::current();
  const T* lv = L.values().data();
  const T* abv = ab.values().data();
  for (std::int64_t s = 0; s < n; ++s) {
    for (std::size_t p = 0; p < plane; ++p) {
      PixelJacobian px = lab_to_rgb_with_jacobian(lv[s * plane + p], abv[(2 * s) * plane + p],
                                                  abv[(2 * s + 1) * plane + p], false, monitor);
      for (int c = 0; c < 3; ++c) y[(3 * s + c) * plane + p] = static_cast<T>(px.rgb[c]);
    }
  }
  const bool rec = autograd::recording<T>({&L, &ab});
  Tensor<T> out = autograd::make_result<T>(Shape{n, 3, L.dim(2), L.dim(3)}, std::move(y), rec);
  if (rec) {
    autograd::record<T>([L, ab, out, n, plane]() {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      const T* lv = L.values().data();
      const T* abv = ab.values().data();
      T* gl = L.requires_grad() ? L.grad_buffer().data() : nullptr;
      T* gab = ab.requires_grad() ? ab.grad_buffer().data() : nullptr;
      for (std::int64_t s = 0; s < n; ++s) {
        for (std::size_t p = 0; p < plane; ++p) {
          PixelJacobian px = lab_to_rgb_with_jacobian(
              lv[s * plane + p], abv[(2 * s) * plane + p], abv[(2 * s + 1) * plane + p], true,
              nullptr);
          double g[3] = {0.0, 0.0, 0.0};
          for (int c = 0; c < 3; ++c) {
            const double gc = gy[(3 * s + c) * plane + p];
            for (int j = 0; j < 3; ++j) g[j] += gc * px.jac[c][j];
          }
          if (gl) gl[s * plane + p] += static_cast<T>(g[0]);
          if (gab) {
            gab[(2 * s) * plane + p] += static_cast<T>(g[1]);
            gab[(2 * s + 1) * plane + p] += static_cast<T>(g[2]);
          }
        }
      }
    });
  }
  return out;
}

template Tensor<float> lab_to_rgb(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> lab_to_rgb(const Tensor<double>&, const Tensor<double>&);

}  // namespace excolor
