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
#ifndef EXCOLOR_AUGMENT_HPP
#define EXCOLOR_AUGMENT_HPP

#include <cstdint>
#include <random>

#include "excolor/image.hpp"

// Builds (target luminance, reference, ground truth) training triples from a
// single colour image: the reference is a noised, TPS-warped, optionally
// flipped and rotated copy of the ground truth.
namespace excolor {

struct AugmentConfig {
  double noise_sigma = 5.0;  // standard deviation on the 0-255 scale
  int tps_grid = 3;
  double tps_max_offset = 0.1;
  bool enable_flip = true;
  bool enable_rotate = true;
  std::uint64_t seed = 0;

  void validate() const;
};

// Adds i.i.d. N(0, (sigma/255)^2) noise to every channel value and clamps
// to [0,1].
RgbImage content_transform(const RgbImage& gt, std::mt19937_64& rng, const AugmentConfig& cfg);

// content_transform -> random TPS warp -> horizontal flip with p = 0.5 ->
// rotation by k * 90 degrees. Quarter turns that would change the image
// shape (non-square inputs) are restricted to k in {0, 2}.
RgbImage make_reference(const RgbImage& gt, std::mt19937_64& rng, const AugmentConfig& cfg);

// CIE L channel of gt, in [0,100].
GrayImage make_target(const RgbImage& gt);

struct TrainingTriple {
  GrayImage target;
  RgbImage reference;
  RgbImage ground_truth;
};

TrainingTriple make_triple(const RgbImage& gt, std::mt19937_64& rng, const AugmentConfig& cfg);

}  // namespace excolor

#endif  // EXCOLOR_AUGMENT_HPP
