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
#ifndef EXCOLOR_COLORSPACE_HPP
#define EXCOLOR_COLORSPACE_HPP

#include <array>
#include <vector>

#include "excolor/image.hpp"
#include "excolor/tensor.hpp"

// sRGB <-> CIE Lab under the D65 white point. Images here carry physical
// units: L in [0,100], a/b roughly in [-128,127].
namespace excolor {

struct Lab {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

Lab rgb_to_lab(const Rgb& rgb);
// Inverse conversion followed by a clamp to [0,1].
Rgb lab_to_rgb(const Lab& lab);

// Scales (a, b) towards zero until the colour is inside the sRGB cube. L is
// kept (clamped to [0, 100]), so later clamping cannot shift luminance.
Lab fit_chroma_to_gamut(const Lab& lab);

// Planar Lab image.
struct LabImage {
  int height = 0;
  int width = 0;
  std::vector<float> L;
  std::vector<float> a;
  std::vector<float> b;

  bool operator==(const LabImage&) const = default;
};

// Planar chrominance pair.
struct AbPlanes {
  int height = 0;
  int width = 0;
  std::vector<float> a;
  std::vector<float> b;
};

LabImage rgb_to_lab(const RgbImage& img);
RgbImage lab_to_rgb(const LabImage& img);

LabImage compose_lab(const GrayImage& L, const AbPlanes& ab);
GrayImage lab_luminance(const LabImage& img);
AbPlanes lab_chrominance(const LabImage& img);

// Differentiable Lab -> RGB on tensors. L is [N,1,H,W] and ab is [N,2,H,W]
// in physical units; the result is [N,3,H,W] clamped to [0,1]. At the
// piecewise breakpoints the derivative of the linear segment is used, and
// clamped outputs pass no gradient.
template <typename T>
Tensor<T> lab_to_rgb(const Tensor<T>& L, const Tensor<T>& ab);

}  // namespace excolor

#endif  // EXCOLOR_COLORSPACE_HPP
