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
#include "excolor/tps.hpp"

namespace excolor {
namespace {

std::vector<Point> random_points(std::mt19937_64& rng, int n, double extent) {
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
  return pts;
}

RgbImage random_image(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  RgbImage img(h, w);
  for (float& v : img.data()) v = u(rng);
  return img;
}

double max_residual(const TpsParams& p, const std::vector<Point>& src, const std::vector<Point>& dst) {
  double worst = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    Point q = eval_tps(p, src[i]);
    worst = std::max({worst, std::abs(q.x - dst[i].x), std::abs(q.y - dst[i].y)});
  }
  return worst;
}

TEST(TpsKernel, ZeroAtOrigin) {
  EXPECT_EQ(tps_kernel(0.0), 0.0);
  EXPECT_NEAR(tps_kernel(4.0), 4.0 * std::log(4.0), 1e-12);
}

TEST(FitTps, SameSourceAndTargetIsIdentity) {
  std::mt19937_64 rng(1);
  auto src = random_points(rng, 8, 50.0);
  TpsParams p = fit_tps(src, src);
  for (const Point& q : random_points(rng, 30, 50.0)) {
    Point r = eval_tps(p, q);
    EXPECT_NEAR(r.x, q.x, 1e-9);
    EXPECT_NEAR(r.y, q.y, 1e-9);
  }
}

TEST(FitTps, TranslationIsAbsorbedByAffinePart) {
  std::mt19937_64 rng(2);
  auto src = random_points(rng, 7, 40.0);
  std::vector<Point> dst;
  for (const Point& s : src) dst.push_back({s.x + 5.0, s.y});
  TpsParams p = fit_tps(src, dst);
  for (const Point& w : p.radial_weights) {
    EXPECT_NEAR(w.x, 0.0, 1e-9);
    EXPECT_NEAR(w.y, 0.0, 1e-9);
  }
  EXPECT_NEAR(p.affine[0][2], 5.0, 1e-9);
  EXPECT_NEAR(p.affine[1][2], 0.0, 1e-9);
  Point o = eval_tps(p, {0.0, 0.0});
  EXPECT_NEAR(o.x, 5.0, 1e-9);
  EXPECT_NEAR(o.y, 0.0, 1e-9);
}

TEST(FitTps, InterpolatesControlPointsAndSatisfiesSideConditions) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> jitter(0.0, 4.0);
  for (int trial = 0; trial < 25; ++trial) {
    auto src = random_points(rng, 4 + trial % 9, 64.0);
    std::vector<Point> dst;
    for (const Point& s : src) dst.push_back({s.x + jitter(rng), s.y + jitter(rng)});
    TpsParams p = fit_tps(src, dst, 0.0);
    EXPECT_LT(max_residual(p, src, dst), 1e-6);
    double sw[2] = {0, 0}, swx[2] = {0, 0}, swy[2] = {0, 0};
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Point& w = p.radial_weights[i];
      sw[0] += w.x;
      sw[1] += w.y;
      swx[0] += w.x * src[i].x;
      swx[1] += w.y * src[i].x;
      swy[0] += w.x * src[i].y;
      swy[1] += w.y * src[i].y;
    }
    for (int c = 0; c < 2; ++c) {
      EXPECT_NEAR(sw[c], 0.0, 1e-8);
      EXPECT_NEAR(swx[c], 0.0, 1e-8);
      EXPECT_NEAR(swy[c], 0.0, 1e-8);
    }
  }
}

TEST(FitTps, RegularisationResidualGrowsWithLambda) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> jitter(0.0, 3.0);
  auto src = random_points(rng, 10, 32.0);
  std::vector<Point> dst;
  for (const Point& s : src) dst.push_back({s.x + jitter(rng), s.y + jitter(rng)});
  double previous = -1.0;
  for (double lambda : {0.0, 0.1, 1.0}) {
    const double r = max_residual(fit_tps(src, dst, lambda), src, dst);
    EXPECT_GE(r, previous);
    previous = r;
  }
  EXPECT_GT(previous, 1e-6);
}

TEST(FitTps, DegenerateInputsAreRejected) {
  std::vector<Point> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  EXPECT_THROW(fit_tps(line, line), NumericalError);
  std::vector<Point> dup{{0, 0}, {5, 0}, {0, 5}, {0, 5}};
  std::vector<Point> dup_target{{0, 0}, {5, 0}, {0, 5}, {1, 6}};
  EXPECT_THROW(fit_tps(dup, dup_target), NumericalError);
  std::vector<Point> two{{0, 0}, {1, 0}};
  EXPECT_THROW(fit_tps(two, two), ArgumentError);
  std::vector<Point> three{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_THROW(fit_tps(three, two), ArgumentError);
}

TEST(EvalTps, IdentityParams) {
  TpsParams id = TpsParams::identity();
  Point p = eval_tps(id, {3.25, -7.5});
  EXPECT_EQ(p.x, 3.25);
  EXPECT_EQ(p.y, -7.5);
}

TEST(WarpImage, IdentityIsExact) {
  std::mt19937_64 rng(5);
  RgbImage img = random_image(rng, 11, 14);
  EXPECT_EQ(warp_image(img, TpsParams::identity()), img);
  auto src = random_points(rng, 6, 10.0);
  EXPECT_EQ(warp_image(img, fit_tps(src, src)), img);
}

TEST(WarpImage, ConstantImageStaysConstant) {
  std::mt19937_64 rng(6);
  RgbImage img(20, 20, 0.4f);
  RgbImage out = warp_image(img, random_tps(rng, 3, 0.2, 20, 20));
  for (float v : out.data()) EXPECT_NEAR(v, 0.4f, 1e-6);
}

TEST(WarpImage, IntegerTranslationShiftsPixels) {
  std::mt19937_64 rng(7);
  RgbImage img = random_image(rng, 12, 20);
  std::vector<Point> src{{0, 0}, {19, 0}, {0, 11}, {19, 11}};
  std::vector<Point> dst;
  for (const Point& s : src) dst.push_back({s.x + 5.0, s.y});
  RgbImage out = warp_image(img, fit_tps(src, dst));
  const auto qa = quantize(out);
  const auto qb = quantize(img);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x + 5 < 20; ++x)
      for (int c = 0; c < 3; ++c) {
        ASSERT_EQ(qa[(y * 20 + x) * 3 + c], qb[(y * 20 + x + 5) * 3 + c]) << y << "," << x;
      }
}

TEST(RandomTps, ZeroOffsetIsIdentityAndSeedsRepeat) {
  std::mt19937_64 a(42), b(42);
  TpsParams z = random_tps(a, 3, 0.0, 16, 16);
  Point p = eval_tps(z, {4.0, 9.0});
  EXPECT_EQ(p.x, 4.0);
  EXPECT_EQ(p.y, 9.0);
  TpsParams p1 = random_tps(a, 3, 0.1, 32, 48);
  TpsParams p2 = random_tps(b, 3, 0.0, 16, 16);
  p2 = random_tps(b, 3, 0.1, 32, 48);
  EXPECT_EQ(p1.source_points, p2.source_points);
  EXPECT_EQ(p1.radial_weights, p2.radial_weights);
  EXPECT_EQ(p1.affine, p2.affine);
}

TEST(RandomTps, DisplacementBound) {
  std::mt19937_64 rng(2024);
  const int h = 40, w = 60;
  for (int trial = 0; trial < 50; ++trial) {
    TpsParams p = random_tps(rng, 3, 0.1, h, w);
    for (const Point& s : p.source_points) {
      Point t = eval_tps(p, s);
      EXPECT_LE(std::abs(t.x - s.x), 0.1 * w + 1e-6);
      EXPECT_LE(std::abs(t.y - s.y), 0.1 * h + 1e-6);
    }
  }
}

// Conditioning must not depend on the image size.
TEST(RandomTps, LargeImagesInterpolate) {
  std::mt19937_64 rng(77);
  for (int side : {256, 1024, 4096}) {
    for (int trial = 0; trial < 5; ++trial) {
      TpsParams p;
      ASSERT_NO_THROW(p = random_tps(rng, 3, 0.1, side, side)) << side;
      for (const Point& s : p.source_points) {
        Point t = eval_tps(p, s);
        EXPECT_LE(std::abs(t.x - s.x), 0.1 * side + 1e-6 * side);
        EXPECT_LE(std::abs(t.y - s.y), 0.1 * side + 1e-6 * side);
      }
    }
  }
}

TEST(FitTps, MatchesAtPixelScale) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  std::normal_distribution<double> jitter(0.0, 40.0);
  std::vector<Point> src, dst;
  for (int i = 0; i < 16; ++i) {
    src.push_back({u(rng), u(rng)});
    dst.push_back({src.back().x + jitter(rng), src.back().y + jitter(rng)});
  }
  EXPECT_LT(max_residual(fit_tps(src, dst), src, dst), 1e-6);
}

TEST(RandomTps, InvalidArguments) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(random_tps(rng, 1, 0.1, 10, 10), ArgumentError);
  EXPECT_THROW(random_tps(rng, 3, 0.5, 10, 10), ArgumentError);
  EXPECT_THROW(random_tps(rng, 3, -0.1, 10, 10), ArgumentError);
}

}  // namespace
}  // namespace excolor
