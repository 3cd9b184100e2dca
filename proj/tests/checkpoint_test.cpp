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

#include <filesystem>
#include <fstream>
#include <random>

#include "excolor/error.hpp"
#include "excolor/checkpoint.hpp"
#include "excolor/synth.hpp"
#include "excolor/train.hpp"
#include "oracles.hpp"

namespace excolor {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("excolor_ckpt_" + name); }

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

RunConfig small_run() {
  RunConfig c;
  c.set("model.input_size", "16");
  c.set("model.num_scales", "2");
  c.set("model.channels", "4,8");
  c.set("model.color_channels", "4,8");
  c.set("model.mlp_hidden", "16");
  c.set("loss.extractor_channels", "4,4");
  c.set("train.batch_size", "2");
  c.set("train.steps", "2");
  return c;
}

TEST(TensorArchive, BytesRoundTripBothDtypes) {
  std::mt19937_64 rng(1);
  TensorArchive a;
  a.header = "hello = 1\n";
  a.tensors.push_back(to_archive("f", oracle::random_tensor<float>(rng, {2, 3})));
  a.tensors.push_back(to_archive("d", oracle::random_tensor<double>(rng, {4})));
  a.tensors.push_back(to_archive("s", Tensor<double>::scalar(2.5)));
  const auto bytes = a.to_bytes();
  TensorArchive b = TensorArchive::from_bytes(bytes);
  EXPECT_EQ(a, b);
  EXPECT_EQ(b.to_bytes(), bytes);
  EXPECT_EQ(to_tensor<double>(*b.find("f")).shape(), (Shape{2, 3}));
  EXPECT_EQ(to_tensor<float>(*b.find("s")).item(), 2.5f);
  EXPECT_EQ(b.find("missing"), nullptr);
}

TEST(TensorArchive, RejectsDamagedBytes) {
  TensorArchive a;
  a.header = "x";
  a.tensors.push_back(to_archive("t", Tensor<float>({8}, 1.0f)));
  auto bytes = a.to_bytes();
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{10}, bytes.size() - 1}) {
    std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
    EXPECT_THROW(TensorArchive::from_bytes(part), CorruptFileError) << cut;
  }
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(TensorArchive::from_bytes(extra), CorruptFileError);
  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(TensorArchive::from_bytes(magic), CorruptFileError);
  auto version = bytes;
  version[4] = 99;
  EXPECT_THROW(TensorArchive::from_bytes(version), VersionError);
}

TEST(Checkpoint, SaveLoadSaveIsByteIdentical) {
  TrainResult r = train_loop(small_run(), synthetic_dataset(2, 16, 3));
  ASSERT_TRUE(r.checkpoint.has_optimizer);
  EXPECT_EQ(r.checkpoint.step, 2u);
  const fs::path a = temp_file("a.exck"), b = temp_file("b.exck");
  r.checkpoint.save(a);
  Checkpoint loaded = Checkpoint::load(a);
  EXPECT_EQ(loaded, r.checkpoint);
  loaded.save(b);
  EXPECT_EQ(read_bytes(a), read_bytes(b));
  fs::remove(a);
  fs::remove(b);
}

TEST(Checkpoint, InferenceIsBitwiseIdenticalAfterReload) {
  TrainResult r = train_loop(small_run(), synthetic_dataset(2, 16, 3));
  const fs::path p = temp_file("infer.exck");
  r.checkpoint.save(p);
  ColorizationModel<float> before = model_from_checkpoint(r.checkpoint);
  ColorizationModel<float> after = model_from_checkpoint(Checkpoint::load(p));
  auto data = synthetic_dataset(2, 16, 11);
  GrayImage target = make_target(data[0]);
  EXPECT_EQ(colorize(before, target, data[1]), colorize(after, target, data[1]));
  EXPECT_EQ(encode_color(before, data[1]).values, encode_color(after, data[1]).values);
  fs::remove(p);
}

TEST(Checkpoint, TruncatedAndForeignFilesAreRejected) {
  TrainResult r = train_loop(small_run(), synthetic_dataset(2, 16, 3));
  const fs::path p = temp_file("trunc.exck");
  r.checkpoint.save(p);
  auto bytes = read_bytes(p);
  write_bytes(p, std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bytes.size() / 2)));
  EXPECT_THROW(Checkpoint::load(p), CorruptFileError);
  bytes[4] = 2;
  write_bytes(p, bytes);
  EXPECT_THROW(Checkpoint::load(p), VersionError);

  TensorArchive plain;
  plain.header = "not a checkpoint";
  plain.save(p);
  EXPECT_THROW(Checkpoint::load(p), CorruptFileError);
  fs::remove(p);
  EXPECT_THROW(Checkpoint::load(p), IoError);
}

TEST(Checkpoint, ModelReconstructionChecksParameters) {
  TrainResult r = train_loop(small_run(), synthetic_dataset(2, 16, 3));
  Checkpoint missing = r.checkpoint;
  missing.parameters.pop_back();
  EXPECT_THROW(model_from_checkpoint(missing), CorruptFileError);
  Checkpoint dup = r.checkpoint;
  dup.parameters.back() = dup.parameters.front();
  EXPECT_THROW(model_from_checkpoint(dup), CorruptFileError);
  Checkpoint shape = r.checkpoint;
  shape.parameters.front().shape.push_back(1);
  EXPECT_THROW(model_from_checkpoint(shape), CorruptFileError);
  Checkpoint config = r.checkpoint;
  config.config_text = "[model]\nbogus = 1\n";
  EXPECT_THROW(model_from_checkpoint(config), CorruptFileError);
}

}  // namespace
}  // namespace excolor
