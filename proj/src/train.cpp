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
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "excolor/train.hpp"

namespace excolor {

std::vector<RgbImage> load_dataset(const std::filesystem::path& dir, int size) {
  namespace fs = std::filesystem;
  if (size < 1) throw ArgumentError("dataset image size must be positive");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("data directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".ppm" || ext == ".pgm") files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no .ppm or .pgm images in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<RgbImage> images;
  images.reserve(files.size());
  for (const fs::path& f : files) {
    RgbImage img = load_image(f);
    if (img.height() != size || img.width() != size) img = resize_bilinear(img, size, size);
    images.push_back(std::move(img));
  }
  return images;
}

std::string format_metrics_row(const StepMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%" PRIu64 ",%.9g,%.9g,%.9g,%.3f", m.step, m.loss_total,
                m.loss_rec, m.loss_perc, m.wall_ms);
  return buf;
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<StepMetrics>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write metrics to " + path.string());
  out << kMetricsHeader << "\n";
  for (const StepMetrics& m : rows) out << format_metrics_row(m) << "\n";
  if (!out) throw IoError("failed writing " + path.string());
}

RunConfig config_from_checkpoint(const Checkpoint& ckpt) {
  try {
    return RunConfig::parse(ckpt.config_text);
  } catch (const ConfigError& e) {
    throw CorruptFileError(std::string("checkpoint configuration is invalid: ") + e.what());
  }
}

ColorizationModel<float> model_from_checkpoint(const Checkpoint& ckpt) {
  ColorizationModel<float> model(config_from_checkpoint(ckpt).model());
  ParameterList<float> params = model.parameters();
  std::set<std::string> seen;
  for (const ArchiveTensor& entry : ckpt.parameters) {
    if (!seen.insert(entry.name).second) {
      throw CorruptFileError("checkpoint lists parameter " + entry.name + " twice");
    }
  }
  if (seen.size() != params.size()) {
    throw CorruptFileError("checkpoint holds " + std::to_string(seen.size()) +
                           " parameters, model has " + std::to_string(params.size()));
  }
  for (NamedTensor<float>& p : params) {
    auto it = std::find_if(ckpt.parameters.begin(), ckpt.parameters.end(),
                           [&](const ArchiveTensor& e) { return e.name == p.name; });
    if (it == ckpt.parameters.end()) throw CorruptFileError("checkpoint lacks parameter " + p.name);
    if (it->shape != p.tensor.shape()) {
      throw CorruptFileError("parameter " + p.name + " has shape " + to_string(it->shape) +
                             ", model expects " + to_string(p.tensor.shape()));
    }
    Tensor<float> stored = to_tensor<float>(*it);
    std::copy(stored.values().begin(), stored.values().end(), p.tensor.mutable_values().begin());
  }
  return model;
}

Trainer::Trainer(const RunConfig& config, std::vector<RgbImage> dataset)
    : config_(config),
      model_config_(config.model()),
      augment_config_(config.augment()),
      loss_config_(config.loss()),
      train_config_(config.train()),
      dataset_(std::move(dataset)),
      model_(model_config_),
      params_(model_.parameters()),
      extractor_(loss_config_.lambda_perc > 0.0 ? make_extractor<float>(loss_config_) : nullptr),
      adam_(AdamState<float>::zeros(params_, config.optim())),
      rng_(train_config_.seed) {
  config_.validate();
  if (dataset_.empty()) throw ArgumentError("training needs at least one image");
  const int s = model_config_.input_size;
  for (const RgbImage& img : dataset_) {
    if (img.height() != s || img.width() != s) {
      throw ArgumentError("training images must be " + std::to_string(s) + "x" +
                          std::to_string(s) + " to match model.input_size");
    }
  }
  order_.resize(dataset_.size());
  cursor_ = order_.size();
}

std::vector<std::size_t> Trainer::next_batch() {
  std::vector<std::size_t> batch;
  while (static_cast<int>(batch.size()) < train_config_.batch_size) {
    if (cursor_ == order_.size()) {
      for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
      std::shuffle(order_.begin(), order_.end(), rng_);
      cursor_ = 0;
    }
    batch.push_back(order_[cursor_++]);
  }
  return batch;
}

StepMetrics Trainer::step() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<GrayImage> targets;
  std::vector<RgbImage> refs;
  std::vector<RgbImage> truths;
  for (std::size_t idx : next_batch()) {
    const RgbImage& gt = dataset_[idx];
    targets.push_back(make_target(gt));
    refs.push_back(make_reference(gt, rng_, augment_config_));
    truths.push_back(gt);
  }

  // Diagnostic for a failed step: where the parameters blew up, plus an
  // optional state dump.
  auto abort_step = [&](const std::string& what) {
    std::ostringstream msg;
    msg << what;
    double worst = 0.0;
    std::string worst_name;
    for (const NamedTensor<float>& p : params_) {
      for (float v : p.tensor.values()) {
        if (!std::isfinite(v) || std::abs(v) > worst) {
          worst = std::isfinite(v) ? std::abs(v) : INFINITY;
          worst_name = p.name;
        }
      }
    }
    msg << "; largest parameter magnitude " << worst << " in " << worst_name;
    if (!dump_path_.empty()) {
      checkpoint().save(dump_path_);
      msg << "; state written to " << dump_path_.string();
    }
    throw NumericalError(msg.str());
  };

  Tape<float> tape;
  StepMetrics m;
  m.step = adam_.t + 1;
  {
    TapeScope<float> scope(tape);
    LossTerms<float> loss;
    try {
      Tensor<float> pred =
          model_.predict_ab(luma_input<float>(targets), reference_input<float>(refs));
      loss = total_loss(pred, ab_tensor<float>(truths), luma_physical<float>(targets),
                        rgb_tensor<float>(truths), loss_config_, extractor_.get());
    } catch (const NumericalError& e) {
      abort_step("step " + std::to_string(m.step) + ": " + e.what());
    }
    m.loss_total = loss.total.item();
    m.loss_rec = loss.rec.item();
    m.loss_perc = loss.perc.item();
    if (!std::isfinite(m.loss_total)) {
      std::ostringstream msg;
      msg << "non-finite loss at step " << m.step << " (total " << m.loss_total << ", rec "
          << m.loss_rec << ", perc " << m.loss_perc << ")";
      abort_step(msg.str());
    }
    tape.backward(loss.total);
  }
  adam_step(params_, adam_);
  for (NamedTensor<float>& p : params_) p.tensor.zero_grad();
  tape.clear();
  m.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return m;
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint c;
  c.config_text = config_.to_text();
  c.step = adam_.t;
  std::ostringstream rng;
  rng << rng_;
  c.rng_state = rng.str();
  for (const NamedTensor<float>& p : params_) c.parameters.push_back(to_archive(p.name, p.tensor));
  c.has_optimizer = true;
  c.adam_options = adam_.options;
  c.adam_step = adam_.t;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const Shape& shape = params_[i].tensor.shape();
    c.adam_m.push_back({params_[i].name, shape, adam_.m[i]});
    c.adam_v.push_back({params_[i].name, shape, adam_.v[i]});
  }
  return c;
}

TrainResult train_loop(const RunConfig& config, std::vector<RgbImage> dataset,
                       const TrainCallbacks& callbacks) {
  Trainer trainer(config, std::move(dataset));
  const TrainConfig tc = config.train();
  TrainResult result;
  result.metrics.reserve(static_cast<std::size_t>(tc.steps));
  for (int i = 0; i < tc.steps; ++i) {
    StepMetrics m = trainer.step();
    result.metrics.push_back(m);
    if (callbacks.on_step) callbacks.on_step(m);
    if (tc.checkpoint_every > 0 && (i + 1) % tc.checkpoint_every == 0 && callbacks.on_checkpoint) {
      callbacks.on_checkpoint(trainer.checkpoint());
    }
  }
  result.checkpoint = trainer.checkpoint();
  return result;
}

}  // namespace excolor
