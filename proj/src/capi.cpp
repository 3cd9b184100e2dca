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
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "excolor/bench.hpp"
#include "excolor/checkpoint.hpp"
#include "excolor/config.hpp"
#include "excolor/excolor.h"
#include "excolor/synth.hpp"
#include "excolor/train.hpp"
#include "excolor/verify.hpp"

struct excolor_config {
  excolor::RunConfig config;
};

struct excolor_image {
  excolor::RgbImage image;
};

struct excolor_model {
  excolor::Checkpoint checkpoint;
  excolor::ColorizationModel<float> model;
};

namespace {

thread_local std::string g_last_error;

excolor_status fail(excolor_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

excolor_status status_of(excolor::ErrorKind kind) {
  using excolor::ErrorKind;
  switch (kind) {
    case ErrorKind::kArgument: return EXCOLOR_ERR_ARGUMENT;
    case ErrorKind::kIo: return EXCOLOR_ERR_IO;
    case ErrorKind::kFormat: return EXCOLOR_ERR_FORMAT;
    case ErrorKind::kNumerical: return EXCOLOR_ERR_NUMERICAL;
    case ErrorKind::kConfig: return EXCOLOR_ERR_CONFIG;
    case ErrorKind::kCorruptFile: return EXCOLOR_ERR_CORRUPT_FILE;
    case ErrorKind::kVersion: return EXCOLOR_ERR_VERSION;
  }
  return EXCOLOR_ERR_INTERNAL;
}

template <typename F>
excolor_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return EXCOLOR_OK;
  } catch (const excolor::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EXCOLOR_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(EXCOLOR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EXCOLOR_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw excolor::ArgumentError(std::string(what) + " must not be null");
}

void copy_out(const std::string& s, char* buffer, std::size_t capacity, std::size_t* needed) {
  if (needed != nullptr) *needed = s.size() + 1;
  if (buffer == nullptr) {
    if (needed == nullptr) throw excolor::ArgumentError("buffer and needed are both null");
    return;
  }
  if (capacity < s.size() + 1) {
    if (capacity > 0) buffer[0] = '\0';
    throw excolor::ArgumentError("buffer of " + std::to_string(capacity) + " bytes is too small, " +
                                 std::to_string(s.size() + 1) + " needed");
  }
  std::memcpy(buffer, s.c_str(), s.size() + 1);
}

excolor::RgbImage at_model_size(const excolor::RgbImage& img, int size) {
  if (img.height() == size && img.width() == size) return img;
  return excolor::resize_bilinear(img, size, size);
}

excolor::Checkpoint initial_checkpoint(const excolor::RunConfig& cfg,
                                       const excolor::ColorizationModel<float>& model) {
  excolor::Checkpoint c;
  c.config_text = cfg.to_text();
  for (const auto& p : model.parameters()) c.parameters.push_back(excolor::to_archive(p.name, p.tensor));
  return c;
}

}  // namespace

extern "C" {

const char* excolor_last_error(void) { return g_last_error.c_str(); }

const char* excolor_status_name(excolor_status status) {
  switch (status) {
    case EXCOLOR_OK: return "ok";
    case EXCOLOR_ERR_ARGUMENT: return "argument error";
    case EXCOLOR_ERR_IO: return "i/o error";
    case EXCOLOR_ERR_FORMAT: return "format error";
    case EXCOLOR_ERR_NUMERICAL: return "numerical error";
    case EXCOLOR_ERR_CONFIG: return "configuration error";
    case EXCOLOR_ERR_CORRUPT_FILE: return "corrupt file";
    case EXCOLOR_ERR_VERSION: return "version mismatch";
    case EXCOLOR_ERR_OUT_OF_MEMORY: return "out of memory";
    case EXCOLOR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* excolor_version(void) { return "1.0.0"; }

excolor_status excolor_config_create(excolor_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new excolor_config{};
  });
}

excolor_status excolor_config_load(const char* path, excolor_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new excolor_config{excolor::RunConfig::load(path)};
  });
}

excolor_status excolor_config_parse(const char* text, excolor_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new excolor_config{excolor::RunConfig::parse(text)};
  });
}

excolor_status excolor_config_set(excolor_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    cfg->config.set(key, value);
  });
}

excolor_status excolor_config_get(const excolor_config* cfg, const char* key, char* buffer,
                                  size_t capacity, size_t* needed) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    copy_out(cfg->config.get(key), buffer, capacity, needed);
  });
}

excolor_status excolor_config_to_text(const excolor_config* cfg, char* buffer, size_t capacity,
                                      size_t* needed) {
  return guarded([&] {
    require(cfg, "cfg");
    copy_out(cfg->config.to_text(), buffer, capacity, needed);
  });
}

excolor_status excolor_config_validate(const excolor_config* cfg) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->config.validate();
  });
}

void excolor_config_destroy(excolor_config* cfg) { delete cfg; }

excolor_status excolor_image_create(int height, int width, excolor_image** out) {
  return guarded([&] {
    require(out, "out");
    if (height < 1 || width < 1) throw excolor::ArgumentError("image dimensions must be positive");
    *out = new excolor_image{excolor::RgbImage(height, width)};
  });
}

excolor_status excolor_image_load(const char* path, excolor_image** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new excolor_image{excolor::load_image(path)};
  });
}

excolor_status excolor_image_save(const excolor_image* img, const char* path) {
  return guarded([&] {
    require(img, "img");
    require(path, "path");
    excolor::save_image(img->image, path);
  });
}

excolor_status excolor_image_size(const excolor_image* img, int* height, int* width) {
  return guarded([&] {
    require(img, "img");
    if (height) *height = img->image.height();
    if (width) *width = img->image.width();
  });
}

excolor_status excolor_image_data(excolor_image* img, float** data) {
  return guarded([&] {
    require(img, "img");
    require(data, "data");
    *data = img->image.data().data();
  });
}

excolor_status excolor_image_resize(const excolor_image* img, int height, int width,
                                    excolor_image** out) {
  return guarded([&] {
    require(img, "img");
    require(out, "out");
    *out = new excolor_image{excolor::resize_bilinear(img->image, height, width)};
  });
}

void excolor_image_destroy(excolor_image* img) { delete img; }

excolor_status excolor_augment(const excolor_image* in, const excolor_config* cfg, uint64_t seed,
                               excolor_image** out) {
  return guarded([&] {
    require(in, "in");
    require(cfg, "cfg");
    require(out, "out");
    excolor::AugmentConfig ac = cfg->config.augment();
    ac.seed = seed;
    ac.validate();
    std::mt19937_64 rng(seed);
    *out = new excolor_image{excolor::make_reference(in->image, rng, ac)};
  });
}

excolor_status excolor_train(const excolor_config* cfg, const char* data_dir,
                             const char* checkpoint_path, const char* metrics_path,
                             excolor_progress_fn progress, void* user) {
  return guarded([&] {
    require(cfg, "cfg");
    require(data_dir, "data_dir");
    require(checkpoint_path, "checkpoint_path");
    cfg->config.validate();
    const excolor::TrainConfig tc = cfg->config.train();
    std::vector<excolor::RgbImage> data =
        excolor::load_dataset(data_dir, cfg->config.model().input_size);
    excolor::Trainer trainer(cfg->config, std::move(data));
    trainer.set_dump_path(std::string(checkpoint_path) + ".nonfinite");
    std::vector<excolor::StepMetrics> rows;
    for (int i = 0; i < tc.steps; ++i) {
      const excolor::StepMetrics m = trainer.step();
      rows.push_back(m);
      if (progress) {
        excolor_step_metrics cm{m.step, m.loss_total, m.loss_rec, m.loss_perc, m.wall_ms};
        progress(&cm, user);
      }
      if (tc.checkpoint_every > 0 && (i + 1) % tc.checkpoint_every == 0) {
        trainer.checkpoint().save(checkpoint_path);
      }
    }
    trainer.checkpoint().save(checkpoint_path);
    if (metrics_path != nullptr) excolor::write_metrics_csv(metrics_path, rows);
  });
}

excolor_status excolor_model_init(const excolor_config* cfg, excolor_model** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    excolor::ColorizationModel<float> model(cfg->config.model());
    excolor::Checkpoint ckpt = initial_checkpoint(cfg->config, model);
    *out = new excolor_model{std::move(ckpt), std::move(model)};
  });
}

excolor_status excolor_model_load(const char* checkpoint_path, excolor_model** out) {
  return guarded([&] {
    require(checkpoint_path, "checkpoint_path");
    require(out, "out");
    excolor::Checkpoint ckpt = excolor::Checkpoint::load(checkpoint_path);
    excolor::ColorizationModel<float> model = excolor::model_from_checkpoint(ckpt);
    *out = new excolor_model{std::move(ckpt), std::move(model)};
  });
}

excolor_status excolor_model_save(const excolor_model* model, const char* checkpoint_path) {
  return guarded([&] {
    require(model, "model");
    require(checkpoint_path, "checkpoint_path");
    model->checkpoint.save(checkpoint_path);
  });
}

excolor_status excolor_model_input_size(const excolor_model* model, int* size) {
  return guarded([&] {
    require(model, "model");
    require(size, "size");
    *size = model->model.config().input_size;
  });
}

excolor_status excolor_model_embedding_dim(const excolor_model* model, int* dim) {
  return guarded([&] {
    require(model, "model");
    require(dim, "dim");
    *dim = model->model.config().embedding_dim;
  });
}

void excolor_model_destroy(excolor_model* model) { delete model; }

excolor_status excolor_embed(const excolor_model* model, const excolor_image* reference, float* out,
                             size_t capacity) {
  return guarded([&] {
    require(model, "model");
    require(reference, "reference");
    require(out, "out");
    const int size = model->model.config().input_size;
    excolor::ColorEmbedding z = excolor::encode_color(model->model, at_model_size(reference->image, size));
    if (capacity < z.values.size()) {
      throw excolor::ArgumentError("embedding needs " + std::to_string(z.values.size()) + " floats");
    }
    std::copy(z.values.begin(), z.values.end(), out);
  });
}

excolor_status excolor_colorize(const excolor_model* model, const excolor_image* target,
                                const excolor_image* reference, excolor_image** out) {
  return guarded([&] {
    require(model, "model");
    require(target, "target");
    require(reference, "reference");
    require(out, "out");
    const int size = model->model.config().input_size;
    const excolor::GrayImage luma = excolor::make_target(at_model_size(target->image, size));
    *out = new excolor_image{
        excolor::colorize(model->model, luma, at_model_size(reference->image, size))};
  });
}

excolor_status excolor_verify(int inject_fault, excolor_line_fn on_check, void* user,
                              int* failures) {
  return guarded([&] {
    excolor::VerifyOptions opts;
    opts.inject_fault = inject_fault != 0;
    auto results = excolor::run_verify(opts, [&](const excolor::CheckResult& r) {
      if (on_check) on_check(excolor::format_check_row(r).c_str(), r.passed ? 1 : 0, user);
    });
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    if (failures) *failures = failed;
  });
}

excolor_status excolor_bench(const excolor_model* model, const int* sizes, size_t count,
                             int repeats, double* medians_ms, excolor_line_fn report, void* user) {
  return guarded([&] {
    require(model, "model");
    require(sizes, "sizes");
    std::vector<int> wanted(sizes, sizes + count);
    std::vector<excolor::BenchRow> rows = excolor::run_bench(model->model, wanted, repeats);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (medians_ms) medians_ms[i] = rows[i].ok ? rows[i].median_ms : -1.0;
    }
    if (report) {
      std::istringstream lines(excolor::format_bench_report(rows));
      std::string line;
      while (std::getline(lines, line)) report(line.c_str(), 1, user);
    }
  });
}

excolor_status excolor_synth(const char* dir, int count, int size, uint64_t seed) {
  return guarded([&] {
    require(dir, "dir");
    excolor::write_synthetic_dataset(dir, count, size, seed);
  });
}

}  // extern "C"
