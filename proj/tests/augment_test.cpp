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

#include <algorithm>
#include <cmath>
#include <random>

#include "excolor/error.hpp"
#include "excolor/augment.hpp"
#include "excolor/colorspace.hpp"
#include "excolor/synth.hpp"

namespace excolor {
namespace {

AugmentConfig identity_config() {
  AugmentConfig c;
  c.noise_sigma = 0.0;
  c.tps_max_offset = 0.0;
  c.enable_flip = false;
  c.enable_rotate = false;
  return c;
}

TEST(AugmentConfig, Validation) {
  AugmentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.noise_sigma = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = AugmentConfig{};
  c.tps_max_offset = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ContentTransform, ZeroSigmaIsIdentity) {
  RgbImage img = synthetic_dataset(1, 16, 3)[0];
  std::mt19937_64 rng(1);
  AugmentConfig c;
  c.noise_sigma = 0.0;
  EXPECT_EQ(content_transform(img, rng, c), img);
}

TEST(ContentTransform, SameSeedSameOutput) {
  RgbImage img = synthetic_dataset(1, 16, 3)[0];
  std::mt19937_64 a(9), b(9);
  AugmentConfig c;
  EXPECT_EQ(content_transform(img, a, c), content_transform(img, b, c));
}

TEST(ContentTransform, NoiseStatistics) {
  // Mid-grey keeps clamping out of reach (5 sigma is about 0.1).
  RgbImage img(578, 577, 0.5f);  // just over 10^6 channel values
  std::mt19937_64 rng(77);
  AugmentConfig c;
  c.noise_sigma = 5.0;
  RgbImage out = content_transform(img, rng, c);
  double sum = 0.0, sq = 0.0;
  const auto n = static_cast<double>(out.data().size());
  for (float v : out.data()) {
    const double d = static_cast<double>(v) - 0.5;
    sum += d;
    sq += d * d;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sq / n - mean * mean);
  EXPECT_LT(std::abs(mean), 0.001);
  EXPECT_NEAR(stddev, 5.0 / 255.0, 0.02 * 5.0 / 255.0);
}

TEST(ContentTransform, OutputIsClamped) {
  RgbImage img(32, 32, 1.0f);
  std::mt19937_64 rng(2);
  AugmentConfig c;
  c.noise_sigma = 40.0;
  RgbImage out = content_transform(img, rng, c);
  for (float v : out.data()) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(MakeReference, IdentityPipelineReturnsInput) {
  RgbImage img = synthetic_dataset(1, 24, 5)[0];
  std::mt19937_64 rng(3);
  EXPECT_EQ(make_reference(img, rng, identity_config()), img);
}

TEST(MakeReference, DeterministicAndShapePreserving) {
  for (auto [h, w] : {std::pair{32, 32}, {24, 40}}) {
    RgbImage img = resize_bilinear(synthetic_dataset(1, 48, 6)[0], h, w);
    std::mt19937_64 a(123), b(123);
    AugmentConfig c;
    for (int i = 0; i < 8; ++i) {
      RgbImage ra = make_reference(img, a, c);
      RgbImage rb = make_reference(img, b, c);
      EXPECT_EQ(quantize(ra), quantize(rb));
      EXPECT_EQ(ra.height(), h);
      EXPECT_EQ(ra.width(), w);
    }
  }
}

TEST(MakeReference, PreservesColourStatistics) {
  const auto images = synthetic_dataset(4, 64, 8);
  std::mt19937_64 rng(31);
  AugmentConfig c;
  for (const RgbImage& img : images) {
    for (int trial = 0; trial < 10; ++trial) {
      RgbImage ref = make_reference(img, rng, c);
      for (int ch = 0; ch < 3; ++ch) {
        double m0 = 0.0, m1 = 0.0;
        for (int y = 0; y < 64; ++y)
          for (int x = 0; x < 64; ++x) {
            m0 += img.at(y, x, ch);
            m1 += ref.at(y, x, ch);
          }
        EXPECT_NEAR(m0 / 4096.0, m1 / 4096.0, 0.05);
      }
    }
  }
}

TEST(MakeReference, FlipAndRotationAreSampled) {
  // With noise and warping off, each output is one of the eight symmetries.
  RgbImage img = synthetic_dataset(1, 16, 2)[0];
  AugmentConfig c = identity_config();
  c.enable_flip = true;
  c.enable_rotate = true;
  std::mt19937_64 rng(5);
  std::vector<RgbImage> seen;
  for (int i = 0; i < 200; ++i) {
    RgbImage r = make_reference(img, rng, c);
    bool known = false;
    for (int f = 0; f < 2 && !known; ++f)
      for (int k = 0; k < 4 && !known; ++k) {
        known = r == rotate90(f ? flip_horizontal(img) : img, k);
      }
    ASSERT_TRUE(known);
    if (std::find(seen.begin(), seen.end(), r) == seen.end()) seen.push_back(r);
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(MakeTarget, LuminanceChannel) {
  GrayImage w = make_target(RgbImage(3, 3, 1.0f));
  for (float v : w.data()) EXPECT_NEAR(v, 100.0f, 1e-3);
  GrayImage k = make_target(RgbImage(3, 3, 0.0f));
  for (float v : k.data()) EXPECT_NEAR(v, 0.0f, 1e-6);
  RgbImage img = synthetic_dataset(1, 8, 1)[0];
  EXPECT_EQ(make_target(img), lab_luminance(rgb_to_lab(img)));
}

TEST(MakeTriple, IdentitySettingsDegenerate) {
  RgbImage img = synthetic_dataset(1, 16, 4)[0];
  std::mt19937_64 rng(8);
  TrainingTriple t = make_triple(img, rng, identity_config());
  EXPECT_EQ(t.reference, img);
  EXPECT_EQ(t.ground_truth, img);
  EXPECT_EQ(t.target, make_target(img));
  EXPECT_EQ(make_target(t.reference), t.target);
}

}  // namespace
}  // namespace excolor
