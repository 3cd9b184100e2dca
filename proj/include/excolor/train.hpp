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
#ifndef EXCOLOR_TRAIN_HPP
#define EXCOLOR_TRAIN_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "excolor/augment.hpp"
#include "excolor/checkpoint.hpp"
#include "excolor/config.hpp"
#include "excolor/loss.hpp"
#include "excolor/model.hpp"
#include "excolor/optim.hpp"

namespace excolor {

// Every .ppm/.pgm file in dir, in lexicographic order, resized to size x size.
std::vector<RgbImage> load_dataset(const std::filesystem::path& dir, int size);

struct StepMetrics {
  std::uint64_t step = 0;  // 1-based
  double loss_total = 0.0;
  double loss_rec = 0.0;
  double loss_perc = 0.0;
  double wall_ms = 0.0;
};

inline constexpr const char* kMetricsHeader = "step,loss_total,loss_rec,loss_perc,wall_ms";

std::string format_metrics_row(const StepMetrics& m);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<StepMetrics>& rows);

// Builds a model from a checkpoint, checking that every parameter appears
// exactly once with the expected shape.
ColorizationModel<float> model_from_checkpoint(const Checkpoint& ckpt);
RunConfig config_from_checkpoint(const Checkpoint& ckpt);

// Self-reference training. All randomness (batch order and augmentation)
// comes from one generator seeded with train.seed, so two trainers built
// from the same configuration and data produce identical trajectories.
class Trainer {
 public:
  Trainer(const RunConfig& config, std::vector<RgbImage> dataset);

  // One optimisation step on a freshly augmented batch. Throws
  // NumericalError when the loss is not finite; if a dump path is set the
  // current state is written there first.
  StepMetrics step();

  Checkpoint checkpoint() const;

  const ColorizationModel<float>& model() const { return model_; }
  const FeatureExtractor<float>& extractor() const { return *extractor_; }
  std::uint64_t steps_done() const { return adam_.t; }

  void set_dump_path(std::filesystem::path path) { dump_path_ = std::move(path); }

 private:
  std::vector<std::size_t> next_batch();

  RunConfig config_;
  ModelConfig model_config_;
  AugmentConfig augment_config_;
  LossConfig loss_config_;
  TrainConfig train_config_;
  std::vector<RgbImage> dataset_;
  ColorizationModel<float> model_;
  ParameterList<float> params_;
  std::shared_ptr<FeatureExtractor<float>> extractor_;
  AdamState<float> adam_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::filesystem::path dump_path_;
};

struct TrainCallbacks {
  std::function<void(const StepMetrics&)> on_step;
  std::function<void(const Checkpoint&)> on_checkpoint;  // every train.checkpoint_every steps
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<StepMetrics> metrics;
};

// Runs train.steps steps.
TrainResult train_loop(const RunConfig& config, std::vector<RgbImage> dataset,
                       const TrainCallbacks& callbacks = {});

}  // namespace excolor

#endif  // EXCOLOR_TRAIN_HPP
