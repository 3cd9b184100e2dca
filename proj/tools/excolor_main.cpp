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
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "excolor/excolor.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int report(excolor_status status, const char* what) {
  if (status == EXCOLOR_OK) return kExitOk;
  std::fprintf(stderr, "excolor %s: %s: %s\n", what, excolor_status_name(status),
               excolor_last_error());
  return status == EXCOLOR_ERR_NUMERICAL ? kExitNumerical : kExitUsage;
}

struct ConfigHandle {
  excolor_config* ptr = nullptr;
  ~ConfigHandle() { excolor_config_destroy(ptr); }
};

struct ImageHandle {
  excolor_image* ptr = nullptr;
  ~ImageHandle() { excolor_image_destroy(ptr); }
};

struct ModelHandle {
  excolor_model* ptr = nullptr;
  ~ModelHandle() { excolor_model_destroy(ptr); }
};

excolor_status open_config(const std::string& path, const std::vector<std::string>& overrides,
                           ConfigHandle& cfg) {
  excolor_status st = path.empty() ? excolor_config_create(&cfg.ptr)
                                   : excolor_config_load(path.c_str(), &cfg.ptr);
  if (st != EXCOLOR_OK) return st;
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      // Let the library produce the diagnostic.
      st = excolor_config_set(cfg.ptr, kv.c_str(), "");
      if (st == EXCOLOR_OK) continue;
      return st;
    }
    st = excolor_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != EXCOLOR_OK) return st;
  }
  return excolor_config_validate(cfg.ptr);
}

struct TrainArgs {
  std::string config, data, out, metrics;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  int steps = -1;
  bool has_seed = false;
  bool quiet = false;
};

void print_progress(const excolor_step_metrics* m, void* user) {
  const int every = *static_cast<int*>(user);
  if (every > 0 && (m->step % static_cast<std::uint64_t>(every) == 0 || m->step == 1)) {
    std::printf("step %6llu  loss %.5f  rec %.5f  perc %.5f  %.0f ms\n",
                static_cast<unsigned long long>(m->step), m->loss_total, m->loss_rec, m->loss_perc,
                m->wall_ms);
    std::fflush(stdout);
  }
}

int cmd_train(const TrainArgs& a) {
  ConfigHandle cfg;
  std::vector<std::string> overrides = a.overrides;
  if (a.has_seed) overrides.push_back("train.seed=" + std::to_string(a.seed));
  if (a.steps >= 0) overrides.push_back("train.steps=" + std::to_string(a.steps));
  if (int rc = report(open_config(a.config, overrides, cfg), "train")) return rc;
  const std::string metrics = a.metrics.empty() ? a.out + ".metrics.csv" : a.metrics;
  int every = a.quiet ? 0 : 50;
  excolor_status st = excolor_train(cfg.ptr, a.data.c_str(), a.out.c_str(), metrics.c_str(),
                                    print_progress, &every);
  if (int rc = report(st, "train")) return rc;
  std::printf("wrote %s and %s\n", a.out.c_str(), metrics.c_str());
  return kExitOk;
}

struct ColorizeArgs {
  std::string target, reference, checkpoint, out;
};

int cmd_colorize(const ColorizeArgs& a) {
  ModelHandle model;
  ImageHandle target, reference, result;
  if (int rc = report(excolor_model_load(a.checkpoint.c_str(), &model.ptr), "colorize")) return rc;
  if (int rc = report(excolor_image_load(a.target.c_str(), &target.ptr), "colorize")) return rc;
  if (int rc = report(excolor_image_load(a.reference.c_str(), &reference.ptr), "colorize")) return rc;
  excolor_status st = excolor_colorize(model.ptr, target.ptr, reference.ptr, &result.ptr);
  if (int rc = report(st, "colorize")) return rc;
  return report(excolor_image_save(result.ptr, a.out.c_str()), "colorize");
}

struct AugmentArgs {
  std::string in, out, config;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  double noise_sigma = -1.0;
  double tps_max_offset = -1.0;
  int tps_grid = -1;
  bool no_flip = false;
  bool no_rotate = false;
};

int cmd_augment(const AugmentArgs& a) {
  std::vector<std::string> overrides = a.overrides;
  if (a.noise_sigma >= 0) overrides.push_back("augment.noise_sigma=" + std::to_string(a.noise_sigma));
  if (a.tps_max_offset >= 0) {
    overrides.push_back("augment.tps_max_offset=" + std::to_string(a.tps_max_offset));
  }
  if (a.tps_grid >= 0) overrides.push_back("augment.tps_grid=" + std::to_string(a.tps_grid));
  if (a.no_flip) overrides.push_back("augment.enable_flip=false");
  if (a.no_rotate) overrides.push_back("augment.enable_rotate=false");
  ConfigHandle cfg;
  if (int rc = report(open_config(a.config, overrides, cfg), "augment")) return rc;
  ImageHandle in, out;
  if (int rc = report(excolor_image_load(a.in.c_str(), &in.ptr), "augment")) return rc;
  if (int rc = report(excolor_augment(in.ptr, cfg.ptr, a.seed, &out.ptr), "augment")) return rc;
  return report(excolor_image_save(out.ptr, a.out.c_str()), "augment");
}

void print_line(const char* line, int, void*) {
  std::printf("%s\n", line);
  std::fflush(stdout);
}

int cmd_verify(bool inject_fault) {
  int failures = 0;
  if (int rc = report(excolor_verify(inject_fault ? 1 : 0, print_line, nullptr, &failures), "verify")) {
    return rc;
  }
  if (failures > 0) {
    std::printf("%d check(s) failed\n", failures);
    return kExitVerifyFailed;
  }
  std::printf("all checks passed\n");
  return kExitOk;
}

struct BenchArgs {
  std::vector<int> sizes{256, 512, 1024};
  std::string checkpoint, config;
  int repeats = 5;
};

int cmd_bench(const BenchArgs& a) {
  ModelHandle model;
  if (!a.checkpoint.empty()) {
    if (int rc = report(excolor_model_load(a.checkpoint.c_str(), &model.ptr), "bench")) return rc;
  } else {
    ConfigHandle cfg;
    if (int rc = report(open_config(a.config, {}, cfg), "bench")) return rc;
    if (int rc = report(excolor_model_init(cfg.ptr, &model.ptr), "bench")) return rc;
  }
  std::vector<double> medians(a.sizes.size());
  excolor_status st = excolor_bench(model.ptr, a.sizes.data(), a.sizes.size(), a.repeats,
                                    medians.data(), print_line, nullptr);
  if (int rc = report(st, "bench")) return rc;
  for (double m : medians) {
    if (m < 0) return kExitUsage;
  }
  return kExitOk;
}

struct SynthArgs {
  std::string out;
  int count = 8;
  int size = 64;
  std::uint64_t seed = 1;
};

int cmd_synth(const SynthArgs& a) {
  return report(excolor_synth(a.out.c_str(), a.count, a.size, a.seed), "synth");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exemplar-based image colorization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", excolor_version());

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a directory of colour images");
  train_cmd->add_option("--config", train.config, "Configuration file");
  train_cmd->add_option("--data", train.data, "Directory of .ppm/.pgm images")->required();
  train_cmd->add_option("--out", train.out, "Output checkpoint")->required();
  train_cmd->add_option("--seed", train.seed, "Overrides train.seed")
      ->each([&](const std::string&) { train.has_seed = true; });
  train_cmd->add_option("--steps", train.steps, "Overrides train.steps")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--metrics", train.metrics, "Metrics CSV (default <out>.metrics.csv)");
  train_cmd->add_option("--set", train.overrides, "section.key=value override")->take_all();
  train_cmd->add_flag("--quiet", train.quiet, "No progress output");

  ColorizeArgs colorize;
  auto* colorize_cmd = app.add_subcommand("colorize", "Colorize a target from a reference image");
  colorize_cmd->add_option("--target", colorize.target, "Target image (its luminance is kept)")->required();
  colorize_cmd->add_option("--reference", colorize.reference, "Colour reference image")->required();
  colorize_cmd->add_option("--checkpoint", colorize.checkpoint, "Trained checkpoint")->required();
  colorize_cmd->add_option("--out", colorize.out, "Output image (.ppm)")->required();

  AugmentArgs augment;
  auto* augment_cmd = app.add_subcommand("augment", "Write the augmented reference of an image");
  augment_cmd->add_option("--in", augment.in, "Input image")->required();
  augment_cmd->add_option("--out", augment.out, "Output image (.ppm)")->required();
  augment_cmd->add_option("--seed", augment.seed, "Random seed");
  augment_cmd->add_option("--config", augment.config, "Configuration file");
  augment_cmd->add_option("--noise-sigma", augment.noise_sigma, "Noise std on the 0-255 scale");
  augment_cmd->add_option("--tps-grid", augment.tps_grid, "Control points per side");
  augment_cmd->add_option("--tps-max-offset", augment.tps_max_offset, "Max offset, image fraction");
  augment_cmd->add_flag("--no-flip", augment.no_flip, "Disable horizontal flips");
  augment_cmd->add_flag("--no-rotate", augment.no_rotate, "Disable rotations");
  augment_cmd->add_option("--set", augment.overrides, "section.key=value override")->take_all();

  bool inject_fault = false;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd->add_flag("--inject-fault", inject_fault)->group("");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time colorize calls at several sizes");
  bench_cmd->add_option("--size", bench.sizes, "Image side(s)")->check(CLI::IsMember({256, 512, 1024}));
  bench_cmd->add_option("--checkpoint", bench.checkpoint, "Checkpoint (default: untrained toy model)");
  bench_cmd->add_option("--config", bench.config, "Configuration for the untrained model");
  bench_cmd->add_option("--repeats", bench.repeats, "Calls per size")->check(CLI::PositiveNumber);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic colour image set");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--count", synth.count, "Number of images")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--size", synth.size, "Image side")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (train_cmd->parsed()) return cmd_train(train);
  if (colorize_cmd->parsed()) return cmd_colorize(colorize);
  if (augment_cmd->parsed()) return cmd_augment(augment);
  if (verify_cmd->parsed()) return cmd_verify(inject_fault);
  if (bench_cmd->parsed()) return cmd_bench(bench);
  if (synth_cmd->parsed()) return cmd_synth(synth);
  return kExitUsage;
}
