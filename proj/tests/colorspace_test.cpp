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

#include <random>

#include "excolor/error.hpp"
#include "excolor/colorspace.hpp"
#include "excolor/gradcheck.hpp"
#include "excolor/ops.hpp"
#include "oracles.hpp"

namespace excolor {
namespace {

TEST(RgbToLab, WhiteAndBlack) {
  Lab w = rgb_to_lab(Rgb{1, 1, 1});
  EXPECT_NEAR(w.L, 100.0, 1e-3);
  EXPECT_NEAR(w.a, 0.0, 1e-3);
  EXPECT_NEAR(w.b, 0.0, 1e-3);
  Lab k = rgb_to_lab(Rgb{0, 0, 0});
  EXPECT_NEAR(k.L, 0.0, 1e-9);
  EXPECT_NEAR(k.a, 0.0, 1e-9);
  EXPECT_NEAR(k.b, 0.0, 1e-9);
}

TEST(RgbToLab, MatchesFormulaOracle) {
  auto red = oracle::srgb_to_lab(1, 0, 0);
  EXPECT_NEAR(red[0], 53.24, 1e-2);
  EXPECT_NEAR(red[1], 80.09, 1e-2);
  EXPECT_NEAR(red[2], 67.20, 1e-2);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double r = u(rng), g = u(rng), b = u(rng);
    Lab got = rgb_to_lab(Rgb{r, g, b});
    auto want = oracle::srgb_to_lab(r, g, b);
    ASSERT_NEAR(got.L, want[0], 1e-2);
    ASSERT_NEAR(got.a, want[1], 1e-2);
    ASSERT_NEAR(got.b, want[2], 1e-2);
  }
  Lab lib_red = rgb_to_lab(Rgb{1, 0, 0});
  EXPECT_NEAR(lib_red.L, 53.24, 1e-2);
  EXPECT_NEAR(lib_red.a, 80.09, 1e-2);
  EXPECT_NEAR(lib_red.b, 67.20, 1e-2);
}

TEST(RgbToLab, GrayHasNoChroma) {
  for (double v = 0.0; v <= 1.0; v += 0.05) {
    Lab g = rgb_to_lab(Rgb{v, v, v});
    EXPECT_LT(std::abs(g.a), 1e-3);
    EXPECT_LT(std::abs(g.b), 1e-3);
    EXPECT_GE(g.L, -1e-12);
    EXPECT_LE(g.L, 100.0 + 1e-9);
  }
}

TEST(LabToRgb, WhiteBlackAndClamp) {
  Rgb w = lab_to_rgb(Lab{100, 0, 0});
  EXPECT_NEAR(w.r, 1.0, 1e-3);
  EXPECT_NEAR(w.g, 1.0, 1e-3);
  EXPECT_NEAR(w.b, 1.0, 1e-3);
  Rgb k = lab_to_rgb(Lab{0, 0, 0});
  EXPECT_NEAR(k.r, 0.0, 1e-9);
  Rgb out = lab_to_rgb(Lab{50, 120, -120});
  for (double c : {out.r, out.g, out.b}) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(LabToRgb, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    Rgb in{u(rng), u(rng), u(rng)};
    Rgb out = lab_to_rgb(rgb_to_lab(in));
    worst = std::max({worst, std::abs(in.r - out.r), std::abs(in.g - out.g), std::abs(in.b - out.b)});
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(ImageConversion, ComposeSplitRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  RgbImage img(4, 6);
  for (float& v : img.data()) v = u(rng);
  LabImage lab = rgb_to_lab(img);
  EXPECT_EQ(compose_lab(lab_luminance(lab), lab_chrominance(lab)), lab);
  RgbImage back = lab_to_rgb(compose_lab(lab_luminance(lab), lab_chrominance(lab)));
  for (std::size_t i = 0; i < img.data().size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 1e-4);
}

TEST(ImageConversion, ZeroLabIsBlack) {
  LabImage lab = compose_lab(GrayImage(2, 3, 0.0f), AbPlanes{2, 3, std::vector<float>(6, 0.f),
                                                              std::vector<float>(6, 0.f)});
  RgbImage rgb = lab_to_rgb(lab);
  for (float v : rgb.data()) EXPECT_EQ(v, 0.0f);
}

TEST(ImageConversion, ComposeRejectsMismatchedSizes) {
  EXPECT_THROW(compose_lab(GrayImage(2, 3), AbPlanes{3, 2, std::vector<float>(6), std::vector<float>(6)}),
               ArgumentError);
}

TEST(TensorLabToRgb, MatchesPixelConversion) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> L(5.0, 95.0), ab(-60.0, 60.0);
  Tensor<double> tl({2, 1, 2, 3});
  Tensor<double> tab({2, 2, 2, 3});
  for (double& v : tl.mutable_values()) v = L(rng);
  for (double& v : tab.mutable_values()) v = ab(rng);
  Tensor<double> rgb = lab_to_rgb(tl, tab);
  for (int n = 0; n < 2; ++n)
    for (int p = 0; p < 6; ++p) {
      Rgb want = lab_to_rgb(Lab{tl.values()[n * 6 + p], tab.values()[(2 * n) * 6 + p],
                                tab.values()[(2 * n + 1) * 6 + p]});
      EXPECT_NEAR(rgb.values()[(3 * n) * 6 + p], want.r, 1e-12);
      EXPECT_NEAR(rgb.values()[(3 * n + 1) * 6 + p], want.g, 1e-12);
      EXPECT_NEAR(rgb.values()[(3 * n + 2) * 6 + p], want.b, 1e-12);
    }
}

TEST(TensorLabToRgb, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> L(20.0, 80.0), ab(-25.0, 25.0);
  Tensor<double> weights = oracle::random_tensor<double>(rng, {1, 3, 3, 3});
  int checked = 0;
  for (int attempt = 0; attempt < 20 && checked < 3; ++attempt) {
    std::vector<double> x(27);
    for (int i = 0; i < 9; ++i) x[i] = L(rng);
    for (int i = 9; i < 27; ++i) x[i] = ab(rng);
    auto program = [&](const Tensor<double>& v) {
      Tensor<double> l = ops::slice_channels(ops::reshape(v, Shape{1, 3, 3, 3}), 0, 1);
      Tensor<double> c = ops::slice_channels(ops::reshape(v, Shape{1, 3, 3, 3}), 1, 2);
      return ops::sum(ops::mul(lab_to_rgb(l, c), weights));
    };
    GradCheckResult r = grad_check(program, Tensor<double>({27}, x));
    if (r.min_nonsmooth_distance < 1e-4) continue;
    EXPECT_LT(r.max_rel_error, 1e-4);
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST(TensorLabToRgb, ClampedChannelsPassNoGradient) {
  Tensor<double> l({1, 1, 1, 1}, 50.0);
  Tensor<double> ab({1, 2, 1, 1}, std::vector<double>{127.0, 0.0});
  ab.set_requires_grad(true);
  Tape<double> tape;
  {
    TapeScope<double> scope(tape);
    Tensor<double> rgb = lab_to_rgb(l, ab);
    // Strong positive a saturates red above 1 and pushes green below 0.
    ASSERT_EQ(rgb.values()[0], 1.0);
    ASSERT_EQ(rgb.values()[1], 0.0);
    tape.backward(ops::sum(ops::slice_channels(rgb, 0, 2)));
  }
  EXPECT_EQ(ab.grad()[0], 0.0);
  EXPECT_EQ(ab.grad()[1], 0.0);
}

}  // namespace
}  // namespace excolor
