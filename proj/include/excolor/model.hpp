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
#ifndef EXCOLOR_MODEL_HPP
#define EXCOLOR_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "excolor/colorspace.hpp"
#include "excolor/image.hpp"
#include "excolor/nn.hpp"

namespace excolor {

struct ModelConfig {
  int input_size = 64;
  int num_scales = 4;
  std::vector<int> channels{32, 64, 128, 256};
  int resblocks = 1;
  int kernel = 3;
  int embedding_dim = 512;
  std::vector<int> color_channels{32, 64, 128, 256};
  int mlp_hidden = 512;
  double demod_eps = 1e-8;
  DemodMode demod_mode = DemodMode::kPerOutputChannel;
  double ab_scale = 110.0;
  double leaky_slope = 0.2;
  std::uint64_t init_seed = 1;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;

  static ModelConfig toy() { return {}; }
  static ModelConfig full_scale();
  // Small enough for finite-difference checks over the whole network.
  static ModelConfig tiny();
};

// Fixed scalings between physical Lab/RGB units and network inputs.
inline constexpr double kLumaHalfRange = 50.0;

struct ColorEmbedding {
  std::vector<float> values;  // embedding_dim entries
};

template <typename T>
using FeaturePyramid = std::vector<Tensor<T>>;

template <typename T>
class ColorizationModel {
 public:
  explicit ColorizationModel(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }

  // ref: [N,3,S,S] with RGB mapped to [-1,1]. Returns z [N,embedding_dim].
  Tensor<T> encode_color(const Tensor<T>& ref) const;

  // luma: [N,1,S,S] holding L/50 - 1. Returns f_1..f_N, halving resolution
  // at every scale after the first.
  FeaturePyramid<T> encode_content(const Tensor<T>& luma) const;

  // Chrominance prediction [N,2,S,S] in physical ab units.
  Tensor<T> decode(const FeaturePyramid<T>& pyramid, const Tensor<T>& z) const;

  Tensor<T> predict_ab(const Tensor<T>& luma, const Tensor<T>& ref) const;

  ParameterList<T> parameters() const;

  // Same weights, different nominal input resolution.
  ColorizationModel with_input_size(int size) const;

 private:
  void check_spatial(const Tensor<T>& x, std::int64_t channels, const char* what) const;

  ModelConfig config_;
  std::vector<Conv2d<T>> color_stages_;
  Mlp<T> color_mlp_;
  std::vector<Conv2d<T>> content_convs_;
  std::vector<std::vector<ResBlock<T>>> content_res_;
  std::vector<Conv2d<T>> up_convs_;
  std::vector<Conv2d<T>> fuse_convs_;
  std::vector<Pffb<T>> pffbs_;
  Conv2d<T> head_;
};

// Batch conversions between images and network tensors.
template <typename T>
Tensor<T> luma_input(std::span<const GrayImage> targets);
template <typename T>
Tensor<T> luma_physical(std::span<const GrayImage> targets);
template <typename T>
Tensor<T> reference_input(std::span<const RgbImage> refs);
template <typename T>
Tensor<T> rgb_tensor(std::span<const RgbImage> images);
template <typename T>
Tensor<T> ab_tensor(std::span<const RgbImage> images);

ColorEmbedding encode_color(const ColorizationModel<float>& model, const RgbImage& ref);

// Predicted chrominance combined with the original luminance of target,
// chroma-fitted into the sRGB gamut and converted back to RGB.
RgbImage colorize(const ColorizationModel<float>& model, const GrayImage& target,
                  const RgbImage& ref);

// Chrominance only, physical units.
AbPlanes predict_chrominance(const ColorizationModel<float>& model, const GrayImage& target,
                              const RgbImage& ref);

}  // namespace excolor

#endif  // EXCOLOR_MODEL_HPP
