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

#include "excolor/augment.hpp"
#include "excolor/colorspace.hpp"
#include "excolor/error.hpp"
#include "excolor/tps.hpp"

namespace excolor {

void AugmentConfig::validate() const {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ConfigError("augment.noise_sigma must be finite and >= 0");
  }
  if (!(tps_max_offset >= 0.0 && tps_max_offset < 0.5)) {
    throw ConfigError("augment.tps_max_offset must lie in [0, 0.5)");
  }
  if (tps_grid < 2) {
    throw ConfigError("augment.tps_grid must be >= 2");
  }
}

RgbImage content_transform(const RgbImage& gt, std::mt19937_64& rng, const AugmentConfig& cfg) {
  cfg.validate();
  if (cfg.noise_sigma == 0.0) return gt;
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma / 255.0);
  RgbImage out = gt;
  for (float& v : out.data()) {
    v = static_cast<float>(std::clamp(static_cast<double>(v) + noise(rng), 0.0, 1.0));
  }
  return out;
}

RgbImage make_reference(const RgbImage& gt, std::mt19937_64& rng, const AugmentConfig& cfg) {
  RgbImage ref = content_transform(gt, rng, cfg);
  if (cfg.tps_max_offset > 0.0) {
    TpsParams params = random_tps(rng, cfg.tps_grid, cfg.tps_max_offset, ref.height(), ref.width());
    ref = warp_image(ref, params);
  }
  if (cfg.enable_flip) {
    std::bernoulli_distribution flip(0.5);
    if (flip(rng)) ref = flip_horizontal(ref);
  }
  if (cfg.enable_rotate) {
    std::uniform_int_distribution<int> quarter(0, 3);
    int k = quarter(rng);
    if (ref.height() != ref.width()) k = (k / 2) * 2;
    ref = rotate90(ref, k);
  }
  return ref;
}

GrayImage make_target(const RgbImage& gt) { return lab_luminance(rgb_to_lab(gt)); }

TrainingTriple make_triple(const RgbImage& gt, std::mt19937_64& rng, const AugmentConfig& cfg) {
  return {make_target(gt), make_reference(gt, rng, cfg), gt};
}

}  // namespace excolor
