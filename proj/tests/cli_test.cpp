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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(EXCOLOR_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops the trailing wall_ms column of every row.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("excolor_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write_small_config() const {
    std::ofstream(path("small.cfg")) << "[model]\ninput_size = 16\nnum_scales = 2\nchannels = 4,8\n"
                                        "color_channels = 4,8\nmlp_hidden = 16\n"
                                        "[loss]\nextractor_channels = 4,4\n"
                                        "[train]\nbatch_size = 2\n";
  }

  fs::path dir_;
};

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("train --data x").code, 2);
  EXPECT_EQ(run("bench --size 300").code, 2);
}

TEST_F(Cli, TrainStepsZeroAndMissingData) {
  ASSERT_EQ(run("synth --out " + path("data") + " --count 2 --size 16").code, 0);
  write_small_config();
  RunResult r = run("train --config " + path("small.cfg") + " --data " + path("data") + " --out " +
                    path("init.exck") + " --steps 0");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(path("init.exck")));
  EXPECT_EQ(read_file(path("init.exck.metrics.csv")), "step,loss_total,loss_rec,loss_perc,wall_ms\n");

  r = run("train --config " + path("small.cfg") + " --data " + path("nowhere") + " --out " + path("x.exck"));
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("nowhere"), std::string::npos);
  r = run("train --config " + path("missing.cfg") + " --data " + path("data") + " --out " + path("x.exck"));
  EXPECT_EQ(r.code, 2);
  r = run("train --config " + path("small.cfg") + " --set train.sped=3 --data " + path("data") +
          " --out " + path("x.exck"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("train.sped"), std::string::npos);
}

TEST_F(Cli, NonFiniteTrainingExitsThree) {
  ASSERT_EQ(run("synth --out " + path("data") + " --count 2 --size 16").code, 0);
  // A step of 1e30 overflows the weights; the next loss is not finite.
  write_small_config();
  {
    std::ofstream cfg(path("small.cfg"), std::ios::app);
    cfg << "[optim]\nlr = 1e30\n";
  }
  RunResult r = run("train --config " + path("small.cfg") + " --data " + path("data") + " --out " +
                    path("x.exck") + " --steps 3 --quiet");
  EXPECT_EQ(r.code, 3) << r.output;
  EXPECT_NE(r.output.find("non-finite"), std::string::npos) << r.output;
  EXPECT_TRUE(fs::exists(path("x.exck.nonfinite")));
}

TEST_F(Cli, SeededToyTrainingIsReproducible) {
  ASSERT_EQ(run("synth --out " + path("data") + " --count 4 --size 64 --seed 3").code, 0);
  std::vector<std::string> csv, ckpt;
  for (const char* name : {"a", "b"}) {
    RunResult r = run("train --data " + path("data") + " --out " + path(std::string(name) + ".exck") +
                      " --seed 11 --steps 4 --set train.batch_size=2 --quiet");
    ASSERT_EQ(r.code, 0) << r.output;
    csv.push_back(read_file(path(std::string(name) + ".exck.metrics.csv")));
    ckpt.push_back(read_file(path(std::string(name) + ".exck")));
  }
  EXPECT_EQ(without_timing(csv[0]), without_timing(csv[1]));
  EXPECT_EQ(ckpt[0], ckpt[1]);
  RunResult other = run("train --data " + path("data") + " --out " + path("c.exck") +
                        " --seed 12 --steps 4 --set train.batch_size=2 --quiet");
  ASSERT_EQ(other.code, 0);
  EXPECT_NE(without_timing(read_file(path("c.exck.metrics.csv"))), without_timing(csv[0]));
}

TEST_F(Cli, ColorizeIsDeterministicAtModelSize) {
  ASSERT_EQ(run("synth --out " + path("data") + " --count 2 --size 24").code, 0);
  write_small_config();
  ASSERT_EQ(run("train --config " + path("small.cfg") + " --data " + path("data") + " --out " +
                path("m.exck") + " --steps 2 --quiet")
                .code,
            0);
  const std::string common = " --target " + path("data/img_000.ppm") + " --reference " +
                             path("data/img_001.ppm") + " --checkpoint " + path("m.exck");
  ASSERT_EQ(run("colorize" + common + " --out " + path("o1.ppm")).code, 0);
  ASSERT_EQ(run("colorize" + common + " --out " + path("o2.ppm")).code, 0);
  const std::string o1 = read_file(path("o1.ppm"));
  EXPECT_EQ(o1, read_file(path("o2.ppm")));
  EXPECT_EQ(o1.rfind("P6\n16 16\n255\n", 0), 0u);

  EXPECT_EQ(run("colorize --target " + path("nope.ppm") + " --reference " + path("data/img_001.ppm") +
                " --checkpoint " + path("m.exck") + " --out " + path("o3.ppm"))
                .code,
            2);
  std::ofstream(path("bad.exck")) << "EXCK garbage";
  EXPECT_EQ(run("colorize" + std::string(" --target ") + path("data/img_000.ppm") + " --reference " +
                path("data/img_001.ppm") + " --checkpoint " + path("bad.exck") + " --out " + path("o4.ppm"))
                .code,
            2);
}

TEST_F(Cli, AugmentIdentityAndDeterminism) {
  ASSERT_EQ(run("synth --out " + path("data") + " --count 1 --size 20").code, 0);
  const std::string in = path("data/img_000.ppm");
  ASSERT_EQ(run("augment --in " + in + " --out " + path("id.ppm") +
                " --noise-sigma 0 --tps-max-offset 0 --no-flip --no-rotate")
                .code,
            0);
  EXPECT_EQ(read_file(path("id.ppm")), read_file(in));
  ASSERT_EQ(run("augment --in " + in + " --out " + path("a.ppm") + " --seed 4").code, 0);
  ASSERT_EQ(run("augment --in " + in + " --out " + path("b.ppm") + " --seed 4").code, 0);
  ASSERT_EQ(run("augment --in " + in + " --out " + path("c.ppm") + " --seed 5").code, 0);
  EXPECT_EQ(read_file(path("a.ppm")), read_file(path("b.ppm")));
  EXPECT_NE(read_file(path("a.ppm")), read_file(path("c.ppm")));
  EXPECT_EQ(run("augment --in " + path("missing.ppm") + " --out " + path("d.ppm")).code, 2);
  EXPECT_EQ(run("augment --in " + in + " --out " + path("d.ppm") + " --tps-grid 1").code, 2);
}

TEST_F(Cli, VerifyExitCodes) {
  RunResult ok = run("verify");
  EXPECT_EQ(ok.code, 0) << ok.output;
  EXPECT_NE(ok.output.find("PASS"), std::string::npos);
  RunResult bad = run("verify --inject-fault");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.output.find("FAIL"), std::string::npos);
  EXPECT_NE(bad.output.find("tanh"), std::string::npos);
}

TEST_F(Cli, BenchReportsThreeRows) {
  write_small_config();
  RunResult r = run("bench --config " + path("small.cfg") + " --repeats 1");
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* row : {"256x256", "512x512", "1024x1024"}) {
    EXPECT_NE(r.output.find(row), std::string::npos) << r.output;
  }
  EXPECT_NE(r.output.find("not comparable to GPU"), std::string::npos);
  r = run("bench --config " + path("small.cfg") + " --size 256 --repeats 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.output.find("512x512"), std::string::npos);
}

TEST_F(Cli, SynthWritesImages) {
  ASSERT_EQ(run("synth --out " + path("s") + " --count 3 --size 8 --seed 2").code, 0);
  EXPECT_TRUE(fs::exists(path("s/img_002.ppm")));
  EXPECT_EQ(run("synth --out " + path("s") + " --count 0").code, 2);
}

}  // namespace
