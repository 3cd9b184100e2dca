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
#include <string>

#include "excolor/colorspace.hpp"
#include "excolor/model.hpp"

namespace excolor {

void ModelConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("model: " + msg); };
  if (embedding_dim != 512) fail("embedding_dim must be 512");
  if (num_scales < 2) fail("num_scales must be >= 2");
  if (static_cast<int>(channels.size()) != num_scales) {
    fail("channels must list one width per scale");
  }
  if (color_channels.empty()) fail("color_channels must not be empty");
  for (int c : channels) {
    if (c < 1) fail("channel widths must be positive");
  }
  for (int c : color_channels) {
    if (c < 1) fail("color channel widths must be positive");
  }
  if (kernel < 1 || kernel % 2 == 0) fail("kernel must be odd and positive");
  if (resblocks < 0) fail("resblocks must be >= 0");
  if (mlp_hidden < 1) fail("mlp_hidden must be positive");
  if (!(demod_eps >= 0.0)) fail("demod_eps must be >= 0");
  if (!(ab_scale > 0.0)) fail("ab_scale must be positive");
  if (!(leaky_slope >= 0.0 && leaky_slope < 1.0)) fail("leaky_slope must lie in [0,1)");
  const int stride_total = 1 << (num_scales - 1);
  if (input_size < 1 || input_size % stride_total != 0) {
    fail("input_size must be a positive multiple of 2^(num_scales-1) = " +
         std::to_string(stride_total));
  }
}

ModelConfig ModelConfig::full_scale() {
  ModelConfig c;
  c.input_size = 256;
  c.num_scales = 4;
  c.channels = {64, 128, 256, 512};
  c.color_channels = {64, 128, 256, 512};
  c.resblocks = 2;
  return c;
}

ModelConfig ModelConfig::tiny() {
  ModelConfig c;
  c.input_size = 8;
  c.num_scales = 2;
  c.channels = {2, 3};
  c.color_channels = {2, 3};
  c.resblocks = 1;
  c.mlp_hidden = 4;
  return c;
}

template <typename T>
ColorizationModel<T>::ColorizationModel(const ModelConfig& config) : config_(config) {
  config_.validate();
  Initializer init(config_.init_seed);
  const auto pad = ops::PadMode::kReplicate;
  const T slope = static_cast<T>(config_.leaky_slope);
  const int k = config_.kernel;

  int in_ch = 3;
  for (int c : config_.color_channels) {
    color_stages_.emplace_back(init, in_ch, c, k, 2, pad);
    in_ch = c;
  }
  color_mlp_ = Mlp<T>(init, {in_ch, config_.mlp_hidden, config_.embedding_dim}, slope);

  in_ch = 1;
  for (int s = 0; s < config_.num_scales; ++s) {
    const int c = config_.channels[s];
    content_convs_.emplace_back(init, in_ch, c, k, s == 0 ? 1 : 2, pad);
    std::vector<ResBlock<T>> blocks;
    for (int r = 0; r < config_.resblocks; ++r) blocks.emplace_back(init, c, k, pad, slope);
    content_res_.push_back(std::move(blocks));
    in_ch = c;
  }

  // Decoder scale i fuses the upsampled coarser map with f_i.
  for (int s = 0; s + 1 < config_.num_scales; ++s) {
    const int c = config_.channels[s];
    up_convs_.emplace_back(init, config_.channels[s + 1], c, k, 1, pad);
    fuse_convs_.emplace_back(init, 2 * c, c, k, 1, pad);
    PffbOptions po;
    po.in_channels = c;
    po.out_channels = c;
    po.kernel = k;
    po.embedding_dim = config_.embedding_dim;
    po.eps = config_.demod_eps;
    po.mode = config_.demod_mode;
    po.pad_mode = pad;
    pffbs_.emplace_back(init, po);
  }
  // Small head so the untrained network starts near a neutral prediction.
  head_ = Conv2d<T>(init, config_.channels[0], 2, k, 1, pad, 0.1);
}

template <typename T>
void ColorizationModel<T>::check_spatial(const Tensor<T>& x, std::int64_t channels,
                                         const char* what) const {
  if (!x.defined() || x.rank() != 4 || x.dim(1) != channels) {
    throw ArgumentError(std::string(what) + ": expected [N," + std::to_string(channels) +
                        ",S,S] input");
  }
  const std::int64_t s = config_.input_size;
  if (x.dim(2) != s || x.dim(3) != s) {
    throw ArgumentError(std::string(what) + ": input is " + std::to_string(x.dim(2)) + "x" +
                        std::to_string(x.dim(3)) + ", model expects " + std::to_string(s) + "x" +
                        std::to_string(s));
  }
}

template <typename T>
Tensor<T> ColorizationModel<T>::encode_color(const Tensor<T>& ref) const {
  check_spatial(ref, 3, "encode_color");
  const T slope = static_cast<T>(config_.leaky_slope);
  Tensor<T> h = ref;
  for (const Conv2d<T>& stage : color_stages_) h = ops::leaky_relu(stage.forward(h), slope);
  return color_mlp_.forward(ops::avgpool_global(h));
}

template <typename T>
FeaturePyramid<T> ColorizationModel<T>::encode_content(const Tensor<T>& luma) const {
  check_spatial(luma, 1, "encode_content");
  const T slope = static_cast<T>(config_.leaky_slope);
  FeaturePyramid<T> pyramid;
  Tensor<T> h = luma;
  for (int s = 0; s < config_.num_scales; ++s) {
    h = ops::leaky_relu(content_convs_[s].forward(h), slope);
    for (const ResBlock<T>& block : content_res_[s]) h = block.forward(h);
    pyramid.push_back(h);
  }
  return pyramid;
}

template <typename T>
Tensor<T> ColorizationModel<T>::decode(const FeaturePyramid<T>& pyramid, const Tensor<T>& z) const {
  if (static_cast<int>(pyramid.size()) != config_.num_scales) {
    throw ArgumentError("decode: pyramid has " + std::to_string(pyramid.size()) +
                        " levels, model has " + std::to_string(config_.num_scales));
  }
  if (!z.defined() || z.rank() != 2 || z.dim(1) != config_.embedding_dim ||
      z.dim(0) != pyramid[0].dim(0)) {
    throw ArgumentError("decode: embedding must be [N," + std::to_string(config_.embedding_dim) +
                        "] matching the pyramid batch");
  }
  const T slope = static_cast<T>(config_.leaky_slope);
  Tensor<T> g = pyramid.back();
  for (int s = config_.num_scales - 2; s >= 0; --s) {
    Tensor<T> up = ops::leaky_relu(up_convs_[s].forward(ops::upsample_nearest2x(g)), slope);
    Tensor<T> fused = ops::leaky_relu(fuse_convs_[s].forward(ops::concat_channels<T>({up, pyramid[s]})), slope);
    g = ops::leaky_relu(pffbs_[s].forward(fused, z), slope);
  }
  return ops::scale(ops::tanh(head_.forward(g)), static_cast<T>(config_.ab_scale));
}

template <typename T>
Tensor<T> ColorizationModel<T>::predict_ab(const Tensor<T>& luma, const Tensor<T>& ref) const {
  return decode(encode_content(luma), encode_color(ref));
}

template <typename T>
ParameterList<T> ColorizationModel<T>::parameters() const {
  ParameterList<T> out;
  for (std::size_t i = 0; i < color_stages_.size(); ++i) {
    color_stages_[i].collect("color.stage" + std::to_string(i), out);
  }
  color_mlp_.collect("color.mlp", out);
  for (std::size_t s = 0; s < content_convs_.size(); ++s) {
    const std::string prefix = "content.scale" + std::to_string(s);
    content_convs_[s].collect(prefix + ".conv", out);
    for (std::size_t r = 0; r < content_res_[s].size(); ++r) {
      content_res_[s][r].collect(prefix + ".res" + std::to_string(r), out);
    }
  }
  for (std::size_t s = 0; s < pffbs_.size(); ++s) {
    const std::string prefix = "decoder.scale" + std::to_string(s);
    up_convs_[s].collect(prefix + ".up", out);
    fuse_convs_[s].collect(prefix + ".fuse", out);
    pffbs_[s].collect(prefix + ".pffb", out);
  }
  head_.collect("head", out);
  return out;
}

template <typename T>
ColorizationModel<T> ColorizationModel<T>::with_input_size(int size) const {
  ModelConfig c = config_;
  c.input_size = size;
  c.validate();
  ColorizationModel copy = *this;
  copy.config_ = c;
  return copy;
}

namespace {

template <typename Image>
void check_batch(std::span<const Image> images) {
  if (images.empty()) throw ArgumentError("empty image batch");
  for (const Image& img : images) {
    if (img.height() != images[0].height() || img.width() != images[0].width()) {
      throw ArgumentError("images in a batch must share dimensions");
    }
  }
}

template <typename T>
Tensor<T> luma_tensor(std::span<const GrayImage> targets, bool normalise) {
  check_batch(targets);
  const std::int64_t h = targets[0].height();
  const std::int64_t w = targets[0].width();
  std::vector<T> v;
  v.reserve(targets.size() * static_cast<std::size_t>(h * w));
  for (const GrayImage& t : targets) {
    for (float L : t.data()) {
      v.push_back(normalise ? static_cast<T>(L / kLumaHalfRange - 1.0) : static_cast<T>(L));
    }
  }
  return Tensor<T>(Shape{static_cast<std::int64_t>(targets.size()), 1, h, w}, std::move(v));
}

template <typename T>
Tensor<T> planar_rgb(std::span<const RgbImage> images, double mul, double add) {
  check_batch(images);
  const std::int64_t h = images[0].height();
  const std::int64_t w = images[0].width();
  const std::size_t plane = static_cast<std::size_t>(h * w);
  std::vector<T> v(images.size() * 3 * plane);
  for (std::size_t n = 0; n < images.size(); ++n) {
    std::span<const float> d = images[n].data();
    for (std::size_t p = 0; p < plane; ++p) {
      for (int c = 0; c < 3; ++c) v[(n * 3 + c) * plane + p] = static_cast<T>(d[p * 3 + c] * mul + add);
    }
  }
  return Tensor<T>(Shape{static_cast<std::int64_t>(images.size()), 3, h, w}, std::move(v));
}

}  // namespace

template <typename T>
Tensor<T> luma_input(std::span<const GrayImage> targets) {
  return luma_tensor<T>(targets, true);
}

template <typename T>
Tensor<T> luma_physical(std::span<const GrayImage> targets) {
  return luma_tensor<T>(targets, false);
}

template <typename T>
Tensor<T> reference_input(std::span<const RgbImage> refs) {
  return planar_rgb<T>(refs, 2.0, -1.0);
}

template <typename T>
Tensor<T> rgb_tensor(std::span<const RgbImage> images) {
  return planar_rgb<T>(images, 1.0, 0.0);
}

template <typename T>
Tensor<T> ab_tensor(std::span<const RgbImage> images) {
  check_batch(images);
  const std::int64_t h = images[0].height();
  const std::int64_t w = images[0].width();
  const std::size_t plane = static_cast<std::size_t>(h * w);
  std::vector<T> v(images.size() * 2 * plane);
  for (std::size_t n = 0; n < images.size(); ++n) {
    LabImage lab = rgb_to_lab(images[n]);
    for (std::size_t p = 0; p < plane; ++p) {
      v[(n * 2) * plane + p] = static_cast<T>(lab.a[p]);
      v[(n * 2 + 1) * plane + p] = static_cast<T>(lab.b[p]);
    }
  }
  return Tensor<T>(Shape{static_cast<std::int64_t>(images.size()), 2, h, w}, std::move(v));
}

ColorEmbedding encode_color(const ColorizationModel<float>& model, const RgbImage& ref) {
  const RgbImage refs[] = {ref};
  NoGradScope<float> no_grad;
  Tensor<float> z = model.encode_color(reference_input<float>(refs));
  return {std::vector<float>(z.values().begin(), z.values().end())};
}

AbPlanes predict_chrominance(const ColorizationModel<float>& model, const GrayImage& target,
                             const RgbImage& ref) {
  const GrayImage targets[] = {target};
  const RgbImage refs[] = {ref};
  NoGradScope<float> no_grad;
  Tensor<float> ab = model.predict_ab(luma_input<float>(targets), reference_input<float>(refs));
  const std::size_t plane = target.pixel_count();
  std::span<const float> v = ab.values();
  return {target.height(), target.width(), std::vector<float>(v.begin(), v.begin() + plane),
          std::vector<float>(v.begin() + plane, v.end())};
}

RgbImage colorize(const ColorizationModel<float>& model, const GrayImage& target,
                  const RgbImage& ref) {
  LabImage lab = compose_lab(target, predict_chrominance(model, target, ref));
  for (std::size_t p = 0; p < lab.L.size(); ++p) {
    Lab fitted = fit_chroma_to_gamut({lab.L[p], lab.a[p], lab.b[p]});
    lab.a[p] = static_cast<float>(fitted.a);
    lab.b[p] = static_cast<float>(fitted.b);
  }
  return lab_to_rgb(lab);
}

#define EXCOLOR_INSTANTIATE_MODEL(T)                                   \
  template class ColorizationModel<T>;                                \
  template Tensor<T> luma_input<T>(std::span<const GrayImage>);       \
  template Tensor<T> luma_physical<T>(std::span<const GrayImage>);    \
  template Tensor<T> reference_input<T>(std::span<const RgbImage>);   \
  template Tensor<T> rgb_tensor<T>(std::span<const RgbImage>);        \
  template Tensor<T> ab_tensor<T>(std::span<const RgbImage>);

EXCOLOR_INSTANTIATE_MODEL(float)
EXCOLOR_INSTANTIATE_MODEL(double)

#undef EXCOLOR_INSTANTIATE_MODEL

}  // namespace excolor
