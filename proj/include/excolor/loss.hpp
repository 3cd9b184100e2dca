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
#ifndef EXCOLOR_LOSS_HPP
#define EXCOLOR_LOSS_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "excolor/nn.hpp"

namespace excolor {

// Frozen network whose deepest feature map defines the perceptual distance.
template <typename T>
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  // rgb: [N,3,H,W] in [0,1].
  virtual Tensor<T> features(const Tensor<T>& rgb) const = 0;
  virtual ParameterList<T> parameters() const = 0;
};

// Stack of convolutions with per-layer stride and leaky ReLU. Weights never
// require gradients.
template <typename T>
class ConvFeatureExtractor : public FeatureExtractor<T> {
 public:
  struct Layer {
    Tensor<T> weight;
    Tensor<T> bias;
    int stride = 2;
  };

  explicit ConvFeatureExtractor(std::vector<Layer> layers, T slope = T(0.2));

  // Seeded random weights, one stride-2 stage per entry of channels.
  static std::shared_ptr<ConvFeatureExtractor> random(std::uint64_t seed,
                                                      const std::vector<int>& channels);

  // Weights from a tensor archive holding layer<i>.weight / layer<i>.bias
  // and header keys layer<i>.stride.
  static std::shared_ptr<ConvFeatureExtractor> load(const std::filesystem::path& path);

  Tensor<T> features(const Tensor<T>& rgb) const override;
  ParameterList<T> parameters() const override;

 private:
  std::vector<Layer> layers_;
  T slope_;
};

struct LossConfig {
  double lambda_rec = 1.0;
  double lambda_perc = 0.1;
  std::string extractor = "random";  // "random" or "file"
  std::string extractor_path;
  std::uint64_t extractor_seed = 7;
  std::vector<int> extractor_channels{16, 32, 64, 64, 64};

  void validate() const;
};

template <typename T>
std::shared_ptr<FeatureExtractor<T>> make_extractor(const LossConfig& cfg);

template <typename T>
Tensor<T> smooth_l1(const Tensor<T>& pred, const Tensor<T>& gt);

// Mean L1 distance between extractor features; the ground-truth branch is
// evaluated without recording.
template <typename T>
Tensor<T> perceptual(const Tensor<T>& pred_rgb, const Tensor<T>& gt_rgb,
                     const FeatureExtractor<T>& extractor);

template <typename T>
struct LossTerms {
  Tensor<T> total;
  Tensor<T> rec;
  Tensor<T> perc;  // scalar zero when lambda_perc == 0
};

// lambda_rec * smooth_l1(P_ab, GT_ab) + lambda_perc * perceptual(P_rgb, GT_rgb)
// with P_rgb = lab_to_rgb(T_L, P_ab). ab and L are in physical units.
template <typename T>
LossTerms<T> total_loss(const Tensor<T>& pred_ab, const Tensor<T>& gt_ab, const Tensor<T>& target_l,
                        const Tensor<T>& gt_rgb, const LossConfig& cfg,
                        const FeatureExtractor<T>* extractor);

}  // namespace excolor

#endif  // EXCOLOR_LOSS_HPP
