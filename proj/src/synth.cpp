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
#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "excolor/error.hpp"
#include "excolor/synth.hpp"

namespace excolor {

namespace {

using Color = std::array<float, 3>;

Color hsv(double h, double s, double v) {
  h = h - std::floor(h);
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  return {static_cast<float>(r + m), static_cast<float>(g + m), static_cast<float>(b + m)};
}

RgbImage one_image(std::mt19937_64& rng, double hue, int size) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Color c0 = hsv(hue, 0.55 + 0.35 * u(rng), 0.35 + 0.3 * u(rng));
  const Color c1 = hsv(hue + 0.08 * (u(rng) - 0.5), 0.5 + 0.4 * u(rng), 0.75 + 0.25 * u(rng));
  const double angle = 2.0 * M_PI * u(rng);
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);

  RgbImage img(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double px = (x + 0.5) / size - 0.5;
      const double py = (y + 0.5) / size - 0.5;
      const double t = std::clamp(0.5 + (px * dx + py * dy), 0.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        img.at(y, x, c) = static_cast<float>((1.0 - t) * c0[c] + t * c1[c]);
      }
    }
  }

  const int shapes = 3 + static_cast<int>(u(rng) * 3.0);
  for (int k = 0; k < shapes; ++k) {
    // Accent colours stay near the image hue, with one complementary shape.
    const double shape_hue = k == 0 ? hue + 0.5 : hue + 0.15 * (u(rng) - 0.5);
    const Color color = hsv(shape_hue, 0.6 + 0.4 * u(rng), 0.5 + 0.5 * u(rng));
    const double cx = u(rng) * size;
    const double cy = u(rng) * size;
    const double r = (0.08 + 0.17 * u(rng)) * size;
    const bool disc = u(rng) < 0.5;
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double ox = x + 0.5 - cx;
        const double oy = y + 0.5 - cy;
        const bool inside = disc ? ox * ox + oy * oy <= r * r
                                 : std::abs(ox) <= r && std::abs(oy) <= 0.7 * r;
        if (!inside) continue;
        for (int c = 0; c < 3; ++c) img.at(y, x, c) = color[c];
      }
    }
  }
  return img;
}

}  // namespace

std::vector<RgbImage> synthetic_dataset(int count, int size, std::uint64_t seed) {
  if (count < 1 || size < 1) throw ArgumentError("synthetic dataset needs count >= 1 and size >= 1");
  std::mt19937_64 rng(seed);
  std::vector<RgbImage> images;
  images.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    images.push_back(one_image(rng, static_cast<double>(i) / count, size));
  }
  return images;
}

void write_synthetic_dataset(const std::filesystem::path& dir, int count, int size,
                             std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::vector<RgbImage> images = synthetic_dataset(count, size, seed);
  for (std::size_t i = 0; i < images.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "img_%03zu.ppm", i);
    save_image(images[i], dir / name);
  }
}

}  // namespace excolor
