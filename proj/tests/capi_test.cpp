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
#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "excolor/excolor.h"

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("excolor_capi_" + name);
  fs::remove_all(p);
  return p;
}

excolor_config* small_config() {
  excolor_config* cfg = nullptr;
  EXPECT_EQ(excolor_config_parse("[model]\ninput_size = 16\nnum_scales = 2\nchannels = 4,8\n"
                                 "color_channels = 4,8\nmlp_hidden = 16\n"
                                 "[loss]\nextractor_channels = 4,4\n"
                                 "[train]\nsteps = 3\nbatch_size = 2\nseed = 4\n",
                                 &cfg),
            EXCOLOR_OK)
      << excolor_last_error();
  return cfg;
}

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(excolor_status_name(EXCOLOR_OK), "ok");
  EXPECT_NE(std::string(excolor_status_name(EXCOLOR_ERR_CORRUPT_FILE)), "");
  EXPECT_NE(std::string(excolor_version()), "");
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(excolor_config_create(nullptr), EXCOLOR_ERR_ARGUMENT);
  EXPECT_NE(std::string(excolor_last_error()), "");
  EXPECT_EQ(excolor_config_set(nullptr, "train.seed", "1"), EXCOLOR_ERR_ARGUMENT);
  EXPECT_EQ(excolor_image_load(nullptr, nullptr), EXCOLOR_ERR_ARGUMENT);
  EXPECT_EQ(excolor_colorize(nullptr, nullptr, nullptr, nullptr), EXCOLOR_ERR_ARGUMENT);
  excolor_config_destroy(nullptr);
  excolor_image_destroy(nullptr);
  excolor_model_destroy(nullptr);
}

TEST(CApi, ConfigStringsAndBufferSizes) {
  excolor_config* cfg = nullptr;
  ASSERT_EQ(excolor_config_create(&cfg), EXCOLOR_OK);
  EXPECT_EQ(excolor_config_set(cfg, "train.seed", "17"), EXCOLOR_OK);
  EXPECT_EQ(excolor_config_set(cfg, "train.sede", "17"), EXCOLOR_ERR_CONFIG);
  EXPECT_NE(std::string(excolor_last_error()).find("train.sede"), std::string::npos);
  size_t needed = 0;
  EXPECT_EQ(excolor_config_get(cfg, "train.seed", nullptr, 0, &needed), EXCOLOR_OK);
  EXPECT_EQ(needed, 3u);
  char small[2] = {'x', 'x'};
  EXPECT_EQ(excolor_config_get(cfg, "train.seed", small, sizeof small, &needed), EXCOLOR_ERR_ARGUMENT);
  EXPECT_EQ(small[0], '\0');
  char buf[8];
  EXPECT_EQ(excolor_config_get(cfg, "train.seed", buf, sizeof buf, nullptr), EXCOLOR_OK);
  EXPECT_STREQ(buf, "17");
  ASSERT_EQ(excolor_config_to_text(cfg, nullptr, 0, &needed), EXCOLOR_OK);
  std::vector<char> text(needed);
  ASSERT_EQ(excolor_config_to_text(cfg, text.data(), text.size(), nullptr), EXCOLOR_OK);
  excolor_config* back = nullptr;
  ASSERT_EQ(excolor_config_parse(text.data(), &back), EXCOLOR_OK);
  EXPECT_EQ(excolor_config_get(back, "train.seed", buf, sizeof buf, nullptr), EXCOLOR_OK);
  EXPECT_STREQ(buf, "17");
  EXPECT_EQ(excolor_config_set(back, "model.input_size", "30"), EXCOLOR_OK);
  EXPECT_EQ(excolor_config_validate(back), EXCOLOR_ERR_CONFIG);
  EXPECT_EQ(excolor_config_parse("[model\n", &back), EXCOLOR_ERR_CONFIG);
  excolor_config_destroy(back);
  excolor_config_destroy(cfg);
}

TEST(CApi, ImagesRoundTripThroughFiles) {
  excolor_image* img = nullptr;
  ASSERT_EQ(excolor_image_create(3, 5, &img), EXCOLOR_OK);
  float* data = nullptr;
  ASSERT_EQ(excolor_image_data(img, &data), EXCOLOR_OK);
  for (int i = 0; i < 45; ++i) data[i] = static_cast<float>(i) / 44.0f;
  const fs::path p = scratch("img.ppm");
  ASSERT_EQ(excolor_image_save(img, p.c_str()), EXCOLOR_OK);
  excolor_image* loaded = nullptr;
  ASSERT_EQ(excolor_image_load(p.c_str(), &loaded), EXCOLOR_OK);
  int h = 0, w = 0;
  EXPECT_EQ(excolor_image_size(loaded, &h, &w), EXCOLOR_OK);
  EXPECT_EQ(h, 3);
  EXPECT_EQ(w, 5);
  float* ld = nullptr;
  excolor_image_data(loaded, &ld);
  for (int i = 0; i < 45; ++i) EXPECT_NEAR(ld[i], data[i], 0.5f / 255.0f + 1e-6f);
  excolor_image* big = nullptr;
  EXPECT_EQ(excolor_image_resize(img, 6, 10, &big), EXCOLOR_OK);
  excolor_image_size(big, &h, &w);
  EXPECT_EQ(w, 10);
  EXPECT_EQ(excolor_image_create(0, 4, &big), EXCOLOR_ERR_ARGUMENT);

  { std::ofstream(p) << "P3\n1 1\n255\n0 0 0\n"; }
  EXPECT_EQ(excolor_image_load(p.c_str(), &big), EXCOLOR_ERR_FORMAT);
  fs::remove(p);
  EXPECT_EQ(excolor_image_load(p.c_str(), &big), EXCOLOR_ERR_IO);
  excolor_image_destroy(big);
  excolor_image_destroy(loaded);
  excolor_image_destroy(img);
}

TEST(CApi, AugmentIsSeededAndIdentityWhenDisabled) {
  excolor_image* img = nullptr;
  ASSERT_EQ(excolor_image_create(8, 8, &img), EXCOLOR_OK);
  float* d = nullptr;
  excolor_image_data(img, &d);
  for (int i = 0; i < 192; ++i) d[i] = static_cast<float>((i * 37) % 255) / 255.0f;
  excolor_config* cfg = nullptr;
  excolor_config_create(&cfg);
  excolor_image *a = nullptr, *b = nullptr;
  ASSERT_EQ(excolor_augment(img, cfg, 5, &a), EXCOLOR_OK);
  ASSERT_EQ(excolor_augment(img, cfg, 5, &b), EXCOLOR_OK);
  float *da = nullptr, *db = nullptr;
  excolor_image_data(a, &da);
  excolor_image_data(b, &db);
  EXPECT_EQ(std::memcmp(da, db, 192 * sizeof(float)), 0);
  excolor_image_destroy(a);
  excolor_image_destroy(b);

  for (const char* kv : {"augment.noise_sigma=0", "augment.tps_max_offset=0"}) {
    std::string s(kv);
    excolor_config_set(cfg, s.substr(0, s.find('=')).c_str(), s.substr(s.find('=') + 1).c_str());
  }
  excolor_config_set(cfg, "augment.enable_flip", "false");
  excolor_config_set(cfg, "augment.enable_rotate", "false");
  ASSERT_EQ(excolor_augment(img, cfg, 9, &a), EXCOLOR_OK);
  excolor_image_data(a, &da);
  EXPECT_EQ(std::memcmp(da, d, 192 * sizeof(float)), 0);
  excolor_image_destroy(a);
  excolor_config_set(cfg, "augment.tps_grid", "1");
  EXPECT_EQ(excolor_augment(img, cfg, 9, &a), EXCOLOR_ERR_CONFIG);
  excolor_config_destroy(cfg);
  excolor_image_destroy(img);
}

struct Progress {
  int calls = 0;
  uint64_t last = 0;
};

TEST(CApi, TrainSaveLoadAndColorize) {
  const fs::path dir = scratch("data");
  ASSERT_EQ(excolor_synth(dir.c_str(), 3, 16, 2), EXCOLOR_OK);
  excolor_config* cfg = small_config();
  const fs::path ckpt = scratch("model.exck");
  const fs::path csv = scratch("metrics.csv");
  Progress progress;
  auto cb = [](const excolor_step_metrics* m, void* user) {
    auto* p = static_cast<Progress*>(user);
    ++p->calls;
    p->last = m->step;
  };
  ASSERT_EQ(excolor_train(cfg, dir.c_str(), ckpt.c_str(), csv.c_str(), cb, &progress), EXCOLOR_OK)
      << excolor_last_error();
  EXPECT_EQ(progress.calls, 3);
  EXPECT_EQ(progress.last, 3u);
  EXPECT_TRUE(fs::exists(csv));

  excolor_model* model = nullptr;
  ASSERT_EQ(excolor_model_load(ckpt.c_str(), &model), EXCOLOR_OK);
  int size = 0, dim = 0;
  excolor_model_input_size(model, &size);
  excolor_model_embedding_dim(model, &dim);
  EXPECT_EQ(size, 16);
  EXPECT_EQ(dim, 512);

  excolor_image *target = nullptr, *ref = nullptr, *out1 = nullptr, *out2 = nullptr;
  ASSERT_EQ(excolor_image_load((dir / "img_000.ppm").c_str(), &target), EXCOLOR_OK);
  ASSERT_EQ(excolor_image_load((dir / "img_001.ppm").c_str(), &ref), EXCOLOR_OK);
  ASSERT_EQ(excolor_colorize(model, target, ref, &out1), EXCOLOR_OK);
  int h = 0, w = 0;
  excolor_image_size(out1, &h, &w);
  EXPECT_EQ(h, 16);

  std::vector<float> z(512);
  EXPECT_EQ(excolor_embed(model, ref, z.data(), 100), EXCOLOR_ERR_ARGUMENT);
  EXPECT_EQ(excolor_embed(model, ref, z.data(), z.size()), EXCOLOR_OK);

  const fs::path resaved = scratch("resaved.exck");
  ASSERT_EQ(excolor_model_save(model, resaved.c_str()), EXCOLOR_OK);
  excolor_model* again = nullptr;
  ASSERT_EQ(excolor_model_load(resaved.c_str(), &again), EXCOLOR_OK);
  ASSERT_EQ(excolor_colorize(again, target, ref, &out2), EXCOLOR_OK);
  float *d1 = nullptr, *d2 = nullptr;
  excolor_image_data(out1, &d1);
  excolor_image_data(out2, &d2);
  EXPECT_EQ(std::memcmp(d1, d2, 16 * 16 * 3 * sizeof(float)), 0);

  // Damaged checkpoint.
  const auto bytes = fs::file_size(resaved);
  fs::resize_file(resaved, bytes / 2);
  excolor_model* broken = nullptr;
  EXPECT_EQ(excolor_model_load(resaved.c_str(), &broken), EXCOLOR_ERR_CORRUPT_FILE);
  EXPECT_EQ(broken, nullptr);

  for (auto* img : {target, ref, out1, out2}) excolor_image_destroy(img);
  excolor_model_destroy(again);
  excolor_model_destroy(model);
  excolor_config_destroy(cfg);
  for (const auto& p : {dir, ckpt, csv, resaved}) fs::remove_all(p);
}

TEST(CApi, TrainingErrorsMapToStatuses) {
  excolor_config* cfg = small_config();
  const fs::path missing = scratch("missing_dir");
  EXPECT_EQ(excolor_train(cfg, missing.c_str(), scratch("x.exck").c_str(), nullptr, nullptr, nullptr),
            EXCOLOR_ERR_IO);
  excolor_model* model = nullptr;
  EXPECT_EQ(excolor_model_load(missing.c_str(), &model), EXCOLOR_ERR_IO);
  excolor_config_destroy(cfg);
}

TEST(CApi, VerifyAndBench) {
  int failures = -1;
  int lines = 0;
  auto count = [](const char*, int, void* user) { ++*static_cast<int*>(user); };
  ASSERT_EQ(excolor_verify(0, count, &lines, &failures), EXCOLOR_OK);
  EXPECT_EQ(failures, 0);
  EXPECT_GT(lines, 40);
  ASSERT_EQ(excolor_verify(1, nullptr, nullptr, &failures), EXCOLOR_OK);
  EXPECT_GT(failures, 0);

  excolor_config* cfg = small_config();
  excolor_model* model = nullptr;
  ASSERT_EQ(excolor_model_init(cfg, &model), EXCOLOR_OK);
  const int sizes[] = {16, 32};
  double medians[2] = {0, 0};
  ASSERT_EQ(excolor_bench(model, sizes, 2, 2, medians, nullptr, nullptr), EXCOLOR_OK);
  EXPECT_GT(medians[0], 0.0);
  EXPECT_GT(medians[1], 0.0);
  excolor_model_destroy(model);
  excolor_config_destroy(cfg);
}

}  // namespace
