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
#ifndef EXCOLOR_IMAGE_HPP
#define EXCOLOR_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace excolor {

// Interleaved RGB, row-major, one float per channel.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int height, int width, float fill = 0.0f);
  RgbImage(int height, int width, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }

  float at(int y, int x, int c) const { return data_[index(y, x, c)]; }
  float& at(int y, int x, int c) { return data_[index(y, x, c)]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3 + c;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

// Single channel. What the value means is up to the producer (the
// augmentation pipeline stores CIE L in [0,100]).
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int height, int width, float fill = 0.0f);
  GrayImage(int height, int width, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }

  float at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  float& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

// Reads binary PPM (P6) or PGM (P5, replicated to three channels), maxval 255.
RgbImage load_image(const std::filesystem::path& path);

// Writes binary PPM. Values are clamped to [0,1] and stored as round(v*255).
void save_image(const RgbImage& img, const std::filesystem::path& path);

std::uint8_t quantize(float v);
std::vector<std::uint8_t> quantize(const RgbImage& img);

// Bilinear resampling with pixel centers at (i + 0.5); samples outside the
// source are clamped to the edge.
RgbImage resize_bilinear(const RgbImage& img, int out_h, int out_w);
GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w);

RgbImage flip_horizontal(const RgbImage& img);

// Rotates counter-clockwise by quarter_turns * 90 degrees.
RgbImage rotate90(const RgbImage& img, int quarter_turns);

}  // namespace excolor

#endif  // EXCOLOR_IMAGE_HPP
