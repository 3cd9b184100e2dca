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
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "excolor/checkpoint.hpp"
#include "excolor/colorspace.hpp"
#include "excolor/loss.hpp"

namespace excolor {

void LossConfig::validate() const {
  if (!(lambda_rec >= 0.0) || !(lambda_perc >= 0.0)) {
    throw ConfigError("loss: weights must be non-negative");
  }
  if (extractor != "random" && extractor != "file") {
    throw ConfigError("loss: extractor must be 'random' or 'file'");
  }
  if (extractor == "file" && extractor_path.empty()) {
    throw ConfigError("loss: extractor 'file' needs extractor_path");
  }
  if (extractor == "random") {
    if (extractor_channels.empty()) throw ConfigError("loss: extractor_channels is empty");
    for (int c : extractor_channels) {
      if (c < 1) throw ConfigError("loss: extractor channel widths must be positive");
    }
  }
}

template <typename T>
ConvFeatureExtractor<T>::ConvFeatureExtractor(std::vector<Layer> layers, T slope)
    : layers_(std::move(layers)), slope_(slope) {
  if (layers_.empty()) throw ArgumentError("feature extractor needs at least one layer");
  std::int64_t in_ch = 3;
  for (Layer& layer : layers_) {
    if (layer.weight.rank() != 4 || layer.weight.dim(1) != in_ch ||
        layer.weight.dim(2) != layer.weight.dim(3) || layer.weight.dim(2) % 2 == 0) {
      throw ArgumentError("feature extractor layer has weight shape " +
                          to_string(layer.weight.shape()));
    }
    if (layer.bias.defined() && layer.bias.numel() != layer.weight.dim(0)) {
      throw ArgumentError("feature extractor bias does not match its weight");
    }
    if (layer.stride < 1) throw ArgumentError("feature extractor stride must be positive");
    layer.weight.set_requires_grad(false);
    if (layer.bias.defined()) layer.bias.set_requires_grad(false);
    in_ch = layer.weight.dim(0);
  }
}

template <typename T>
std::shared_ptr<ConvFeatureExtractor<T>> ConvFeatureExtractor<T>::random(
    std::uint64_t seed, const std::vector<int>& channels) {
  Initializer init(seed);
  std::vector<Layer> layers;
  int in_ch = 3;
  for (int c : channels) {
    Layer layer;
    layer.weight =
        init.normal<T>(Shape{c, in_ch, 3, 3}, std::sqrt(2.0 / (in_ch * 9.0)), 0.0, false);
    layer.bias = init.constant<T>(Shape{c}, 0.0, false);
    layer.stride = 2;
    layers.push_back(std::move(layer));
    in_ch = c;
  }
  return std::make_shared<ConvFeatureExtractor>(std::move(layers));
}

template <typename T>
std::shared_ptr<ConvFeatureExtractor<T>> ConvFeatureExtractor<T>::load(
    const std::filesystem::path& path) {
  const TensorArchive archive = TensorArchive::load(path);
  std::map<std::string, int> strides;
  std::istringstream header(archive.header);
  std::string line;
  while (std::getline(header, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(' ') + 1);
    try {
      strides[key] = std::stoi(line.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw CorruptFileError("extractor header line '" + line + "' is not an integer");
    }
  }
  std::vector<Layer> layers;
  for (int i = 0;; ++i) {
    const std::string prefix = "layer" + std::to_string(i);
    const ArchiveTensor* w = archive.find(prefix + ".weight");
    if (w == nullptr) break;
    Layer layer;
    layer.weight = to_tensor<T>(*w);
    if (const ArchiveTensor* b = archive.find(prefix + ".bias")) layer.bias = to_tensor<T>(*b);
    auto it = strides.find(prefix + ".stride");
    layer.stride = it == strides.end() ? 1 : it->second;
    layers.push_back(std::move(layer));
  }
  if (layers.empty()) {
    throw CorruptFileError("extractor file " + path.string() + " holds no layer0.weight");
  }
  try {
    return std::make_shared<ConvFeatureExtractor>(std::move(layers));
  } catch (const ArgumentError& e) {
    throw CorruptFileError("extractor file " + path.string() + ": " + e.what());
  }
}

template <typename T>
Tensor<T> ConvFeatureExtractor<T>::features(const Tensor<T>& rgb) const {
  if (!rgb.defined() || rgb.rank() != 4 || rgb.dim(1) != 3) {
    throw ArgumentError("feature extractor expects [N,3,H,W] input");
  }
  Tensor<T> h = rgb;
  for (const Layer& layer : layers_) {
    ops::Conv2dOptions opts;
    opts.stride = layer.stride;
    opts.pad = static_cast<int>(layer.weight.dim(2) / 2);
    h = ops::leaky_relu(ops::conv2d(h, layer.weight, layer.bias, opts), slope_);
  }
  return h;
}

template <typename T>
ParameterList<T> ConvFeatureExtractor<T>::parameters() const {
  ParameterList<T> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::string prefix = "layer" + std::to_string(i);
    out.push_back({prefix + ".weight", layers_[i].weight});
    if (layers_[i].bias.defined()) out.push_back({prefix + ".bias", layers_[i].bias});
  }
  return out;
}

template <typename T>
std::shared_ptr<FeatureExtractor<T>> make_extractor(const LossConfig& cfg) {
  cfg.validate();
  if (cfg.extractor == "file") return ConvFeatureExtractor<T>::load(cfg.extractor_path);
  return ConvFeatureExtractor<T>::random(cfg.extractor_seed, cfg.extractor_channels);
}

template <typename T>
Tensor<T> smooth_l1(const Tensor<T>& pred, const Tensor<T>& gt) {
  return ops::smooth_l1_mean(pred, gt);
}

template <typename T>
Tensor<T> perceptual(const Tensor<T>& pred_rgb, const Tensor<T>& gt_rgb,
                     const FeatureExtractor<T>& extractor) {
  if (pred_rgb.shape() != gt_rgb.shape()) {
    throw ArgumentError("perceptual: shape mismatch " + to_string(pred_rgb.shape()) + " vs " +
                        to_string(gt_rgb.shape()));
  }
  Tensor<T> gt_features;
  {
    NoGradScope<T> no_grad;
    gt_features = extractor.features(gt_rgb.detach());
  }
  return ops::l1_mean(extractor.features(pred_rgb), gt_features);
}

template <typename T>
LossTerms<T> total_loss(const Tensor<T>& pred_ab, const Tensor<T>& gt_ab, const Tensor<T>& target_l,
                        const Tensor<T>& gt_rgb, const LossConfig& cfg,
                        const FeatureExtractor<T>* extractor) {
  LossTerms<T> terms;
  terms.rec = smooth_l1(pred_ab, gt_ab);
  Tensor<T> total = ops::scale(terms.rec, static_cast<T>(cfg.lambda_rec));
  if (cfg.lambda_perc > 0.0) {
    if (extractor == nullptr) throw ArgumentError("total_loss: perceptual term needs an extractor");
    terms.perc = perceptual(lab_to_rgb(target_l, pred_ab), gt_rgb, *extractor);
    total = ops::add(total, ops::scale(terms.perc, static_cast<T>(cfg.lambda_perc)));
  } else {
    terms.perc = Tensor<T>::scalar(T(0));
  }
  terms.total = total;
  return terms;
}

#define EXCOLOR_INSTANTIATE_LOSS(T)                                                          \
  template class ConvFeatureExtractor<T>;                                                    \
  template std::shared_ptr<FeatureExtractor<T>> make_extractor<T>(const LossConfig&);        \
  template Tensor<T> smooth_l1(const Tensor<T>&, const Tensor<T>&);                          \
  template Tensor<T> perceptual(const Tensor<T>&, const Tensor<T>&, const FeatureExtractor<T>&); \
  template LossTerms<T> total_loss(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,     \
                                   const Tensor<T>&, const LossConfig&, const FeatureExtractor<T>*);

EXCOLOR_INSTANTIATE_LOSS(float)
EXCOLOR_INSTANTIATE_LOSS(double)

#undef EXCOLOR_INSTANTIATE_LOSS

}  // namespace excolor
