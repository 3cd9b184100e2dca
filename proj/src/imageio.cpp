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
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "excolor/error.hpp"
#include "excolor/image.hpp"

namespace excolor {

namespace {

void check_dims(int height, int width) {
  if (height < 0 || width < 0) {
    throw ArgumentError("image dimensions must be non-negative");
  }
}

// Skips whitespace and '#' comments in a PNM header.
void skip_header_space(std::istream& in) {
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const std::string& path) {
  skip_header_space(in);
  int value = -1;
  if (!(in >> value) || value < 0) {
    throw FormatError("malformed PNM header in " + path);
  }
  return value;
}

template <typename Image>
Image resize_impl(const Image& img, int out_h, int out_w, int channels) {
  if (out_h < 1 || out_w < 1) {
    throw ArgumentError("resize target dimensions must be >= 1");
  }
  if (img.height() < 1 || img.width() < 1) {
    throw ArgumentError("cannot resize an empty image");
  }
  const int in_h = img.height();
  const int in_w = img.width();
  std::vector<float> out(static_cast<std::size_t>(out_h) * out_w * channels);
  std::span<const float> src = img.data();

  const double sy = static_cast<double>(in_h) / out_h;
  const double sx = static_cast<double>(in_w) / out_w;
  for (int oy = 0; oy < out_h; ++oy) {
    double fy = std::clamp((oy + 0.5) * sy - 0.5, 0.0, static_cast<double>(in_h - 1));
    int y0 = static_cast<int>(std::floor(fy));
    int y1 = std::min(y0 + 1, in_h - 1);
    double wy = fy - y0;
    for (int ox = 0; ox < out_w; ++ox) {
      double fx = std::clamp((ox + 0.5) * sx - 0.5, 0.0, static_cast<double>(in_w - 1));
      int x0 = static_cast<int>(std::floor(fx));
      int x1 = std::min(x0 + 1, in_w - 1);
      double wx = fx - x0;
      for (int c = 0; c < channels; ++c) {
        auto px = [&](int y, int x) {
          return static_cast<double>(src[(static_cast<std::size_t>(y) * in_w + x) * channels + c]);
        };
        double top = px(y0, x0) * (1.0 - wx) + px(y0, x1) * wx;
        double bottom = px(y1, x0) * (1.0 - wx) + px(y1, x1) * wx;
        out[(static_cast<std::size_t>(oy) * out_w + ox) * channels + c] =
            static_cast<float>(top * (1.0 - wy) + bottom * wy);
      }
    }
  }
  return Image(out_h, out_w, std::move(out));
}

}  // namespace

RgbImage::RgbImage(int height, int width, float fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  data_.assign(static_cast<std::size_t>(height) * width * 3, fill);
}

RgbImage::RgbImage(int height, int width, std::vector<float> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * width * 3) {
    throw ArgumentError("RgbImage data length does not match height*width*3");
  }
}

GrayImage::GrayImage(int height, int width, float fill) : height_(height), width_(width) {
  check_dims(height, width);
  data_.assign(static_cast<std::size_t>(height) * width, fill);
}

GrayImage::GrayImage(int height, int width, std::vector<float> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * width) {
    throw ArgumentError("GrayImage data length does not match height*width");
  }
}

RgbImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open image " + path.string());
  }
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '6' && magic[1] != '5')) {
    throw FormatError("unsupported image format in " + path.string() +
                      " (expected binary PPM/PGM)");
  }
  const int channels = magic[1] == '6' ? 3 : 1;
  const int width = read_header_int(in, path.string());
  const int height = read_header_int(in, path.string());
  const int maxval = read_header_int(in, path.string());
  if (maxval != 255) {
    throw FormatError("unsupported bit depth (maxval " + std::to_string(maxval) + ") in " +
                      path.string());
  }
  if (width < 1 || height < 1) {
    throw FormatError("empty image in " + path.string());
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(in.get())) {
    throw FormatError("malformed PNM header in " + path.string());
  }
  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw FormatError("truncated raster in " + path.string());
  }
  std::vector<float> data(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t p = 0; p < static_cast<std::size_t>(width) * height; ++p) {
    for (int c = 0; c < 3; ++c) {
      data[p * 3 + c] = static_cast<float>(raw[p * channels + (channels == 3 ? c : 0)]) / 255.0f;
    }
  }
  return RgbImage(height, width, std::move(data));
}

std::uint8_t quantize(float v) {
  float clamped = std::clamp(std::isnan(v) ? 0.0f : v, 0.0f, 1.0f);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0f));
}

std::vector<std::uint8_t> quantize(const RgbImage& img) {
  std::vector<std::uint8_t> bytes(img.data().size());
  std::ranges::transform(img.data(), bytes.begin(), [](float v) { return quantize(v); });
  return bytes;
}

void save_image(const RgbImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write image " + path.string());
  }
  out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<std::uint8_t> bytes = quantize(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("failed writing image " + path.string());
  }
}

RgbImage resize_bilinear(const RgbImage& img, int out_h, int out_w) {
  return resize_impl(img, out_h, out_w, 3);
}

GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w) {
  return resize_impl(img, out_h, out_w, 1);
}

RgbImage flip_horizontal(const RgbImage& img) {
  RgbImage out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = img.at(y, img.width() - 1 - x, c);
      }
    }
  }
  return out;
}

RgbImage rotate90(const RgbImage& img, int quarter_turns) {
  int k = ((quarter_turns % 4) + 4) % 4;
  if (k == 0) {
    return img;
  }
  const int h = img.height();
  const int w = img.width();
  const bool swap = (k % 2) == 1;
  RgbImage out(swap ? w : h, swap ? h : w);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      int sy = 0;
      int sx = 0;
      switch (k) {
        case 1:  // counter-clockwise
          sy = x;
          sx = w - 1 - y;
          break;
        case 2:
          sy = h - 1 - y;
          sx = w - 1 - x;
          break;
        default:
          sy = h - 1 - x;
          sx = y;
          break;
      }
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = img.at(sy, sx, c);
      }
    }
  }
  return out;
}

}  // namespace excolor
