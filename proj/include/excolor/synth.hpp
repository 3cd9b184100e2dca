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
#ifndef EXCOLOR_SYNTH_HPP
#define EXCOLOR_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "excolor/image.hpp"

namespace excolor {

// Deterministic colourful test images: a two-colour gradient background
// with a few filled discs and rectangles. Image i draws its palette around
// hue i / count, so images in one set differ in colour as well as layout.
std::vector<RgbImage> synthetic_dataset(int count, int size, std::uint64_t seed);

// Writes synthetic_dataset(count, size, seed) as img_000.ppm, img_001.ppm, ...
void write_synthetic_dataset(const std::filesystem::path& dir, int count, int size,
                             std::uint64_t seed);

}  // namespace excolor

#endif  // EXCOLOR_SYNTH_HPP
