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
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "excolor/colorspace.hpp"
#include "excolor/gradcheck.hpp"
#include "excolor/loss.hpp"
#include "excolor/model.hpp"
#include "excolor/nn.hpp"
#include "excolor/ops.hpp"
#include "excolor/optim.hpp"
#include "excolor/tps.hpp"
#include "excolor/verify.hpp"

namespace excolor {

namespace {

using TensorD = Tensor<double>;
using Fn = std::function<TensorD(const TensorD&)>;

constexpr double kGradTol = 1e-4;
constexpr double kMinKinkDistance = 1e-4;
constexpr int kGradAttempts = 12;

class Suite {
 public:
  Suite(const VerifyOptions& opts, const std::function<void(const CheckResult&)>& cb)
      : rng_(opts.seed), cb_(cb) {}

  void add(std::string group, std::string name, double value, double threshold,
           bool inclusive = false, std::string detail = {}) {
    CheckResult r{std::move(group), std::move(name),
                  inclusive ? value <= threshold : value < threshold, value, threshold,
                  std::move(detail)};
    if (!std::isfinite(value)) r.passed = false;
    if (cb_) cb_(r);
    results_.push_back(std::move(r));
  }

  TensorD normal(Shape shape, double stddev = 1.0, double mean = 0.0) {
    std::normal_distribution<double> d(mean, stddev);
    std::vector<double> v(static_cast<std::size_t>(numel(shape)));
    for (double& x : v) x = d(rng_);
    return TensorD(std::move(shape), std::move(v));
  }

  TensorD uniform(Shape shape, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(numel(shape)));
    for (double& x : v) x = d(rng_);
    return TensorD(std::move(shape), std::move(v));
  }

  // Reduces g(x) to a scalar through a fixed random projection so that
  // every output element carries a distinct weight.
  Fn projected(const Fn& g, const TensorD& probe) {
    Shape s;
    {
      NoGradScope<double> no_grad;
      s = g(probe).shape();
    }
    TensorD r = normal(s);
    return [g, r](const TensorD& x) { return ops::sum(ops::mul(g(x), r)); };
  }

  // Draws inputs until the evaluation stays clear of non-smooth points.
  void grad(const std::string& name, const std::function<TensorD()>& draw, const Fn& g,
            bool already_scalar = false) {
    GradCheckResult best;
    bool found = false;
    double closest = 0.0;
    for (int attempt = 0; attempt < kGradAttempts; ++attempt) {
      TensorD x = draw();
      Fn f = already_scalar ? g : projected(g, x);
      GradCheckResult r = grad_check(f, x, 1e-5);
      closest = std::max(closest, r.min_nonsmooth_distance);
      if (r.min_nonsmooth_distance >= kMinKinkDistance) {
        best = r;
        found = true;
        break;
      }
    }
    if (!found) {
      add("grad", name, INFINITY, kGradTol, false,
          "no sample clear of kinks (closest " + std::to_string(closest) + ")");
      return;
    }
    add("grad", name, best.max_rel_error, kGradTol, false,
        "worst index " + std::to_string(best.worst_index));
  }

  std::mt19937_64& rng() { return rng_; }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::mt19937_64 rng_;
  std::function<void(const CheckResult&)> cb_;
  std::vector<CheckResult> results_;
};

// Direct nested-loop cross-correlation used as the reference for conv2d.
std::vector<double> naive_conv(const TensorD& x, const TensorD& w, const TensorD& b, int stride,
                               int pad, bool replicate, Shape& out_shape) {
  const auto n = x.dim(0), ci = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const bool per_sample = w.rank() == 5;
  const auto co = per_sample ? w.dim(1) : w.dim(0);
  const auto k = w.dim(w.rank() - 1);
  const auto ho = (h + 2 * pad - k) / stride + 1;
  const auto wo = (wd + 2 * pad - k) / stride + 1;
  out_shape = {n, co, ho, wo};
  std::vector<double> out(static_cast<std::size_t>(n * co * ho * wo), 0.0);
  auto xv = x.values();
  auto wv = w.values();
  for (std::int64_t s = 0; s < n; ++s)
    for (std::int64_t o = 0; o < co; ++o)
      for (std::int64_t oy = 0; oy < ho; ++oy)
        for (std::int64_t ox = 0; ox < wo; ++ox) {
          double acc = b.defined() ? b.values()[o] : 0.0;
          for (std::int64_t i = 0; i < ci; ++i)
            for (std::int64_t ky = 0; ky < k; ++ky)
              for (std::int64_t kx = 0; kx < k; ++kx) {
                std::int64_t iy = oy * stride + ky - pad;
                std::int64_t ix = ox * stride + kx - pad;
                if (replicate) {
                  iy = std::clamp<std::int64_t>(iy, 0, h - 1);
                  ix = std::clamp<std::int64_t>(ix, 0, wd - 1);
                } else if (iy < 0 || iy >= h || ix < 0 || ix >= wd) {
                  continue;
                }
                const std::int64_t widx =
                    per_sample ? (((s * co + o) * ci + i) * k + ky) * k + kx
                               : ((o * ci + i) * k + ky) * k + kx;
                acc += xv[((s * ci + i) * h + iy) * wd + ix] * wv[widx];
              }
          out[((s * co + o) * ho + oy) * wo + ox] = acc;
        }
  return out;
}

void gradient_checks(Suite& s) {
  const Shape sh{2, 3, 4};
  TensorD other = s.normal(sh);
  auto draw = [&s, sh] { return s.normal(sh); };

  s.grad("add", draw, [other](const TensorD& x) { return ops::add(x, other); });
  s.grad("sub", draw, [other](const TensorD& x) { return ops::sub(other, x); });
  s.grad("mul", draw, [other](const TensorD& x) { return ops::mul(x, other); });
  s.grad("mul_self", draw, [](const TensorD& x) { return ops::mul(x, x); });
  s.grad("scale", draw, [](const TensorD& x) { return ops::scale(x, -2.5); });
  s.grad("add_scalar", draw, [](const TensorD& x) { return ops::add_scalar(x, 0.75); });
  s.grad("relu", draw, [](const TensorD& x) { return ops::relu(x); });
  s.grad("leaky_relu", draw, [](const TensorD& x) { return ops::leaky_relu(x, 0.2); });
  s.grad("tanh", draw, [](const TensorD& x) { return ops::tanh(x); });
  s.grad("sum", draw, [](const TensorD& x) { return ops::sum(ops::mul(x, x)); }, true);
  s.grad("mean", draw, [](const TensorD& x) { return ops::mean(ops::tanh(x)); }, true);
  s.grad("reshape", draw, [](const TensorD& x) { return ops::reshape(x, Shape{6, 4}); });

  const Shape img{2, 3, 5, 6};
  auto draw_img = [&s, img] { return s.normal(img); };
  TensorD w = s.normal({4, 3, 3, 3}, 0.5);
  TensorD b = s.normal({4});
  ops::Conv2dOptions zero1{1, 1, ops::PadMode::kZero};
  ops::Conv2dOptions rep2{2, 1, ops::PadMode::kReplicate};
  TensorD x_fixed = s.normal(img);
  s.grad("conv2d.input.zero_pad", draw_img,
         [w, b, zero1](const TensorD& x) { return ops::conv2d(x, w, b, zero1); });
  s.grad("conv2d.input.replicate_stride2", draw_img,
         [w, b, rep2](const TensorD& x) { return ops::conv2d(x, w, b, rep2); });
  s.grad("conv2d.weight", [&s] { return s.normal({4, 3, 3, 3}, 0.5); },
         [x_fixed, b, rep2](const TensorD& wt) { return ops::conv2d(x_fixed, wt, b, rep2); });
  s.grad("conv2d.bias", [&s] { return s.normal({4}); },
         [x_fixed, w, zero1](const TensorD& bb) { return ops::conv2d(x_fixed, w, bb, zero1); });
  s.grad("conv2d.per_sample_weight", [&s] { return s.normal({2, 4, 3, 3, 3}, 0.5); },
         [x_fixed, b, zero1](const TensorD& wt) { return ops::conv2d(x_fixed, wt, b, zero1); });

  TensorD lw = s.normal({5, 3});
  TensorD lb = s.normal({3});
  TensorD lx = s.normal({4, 5});
  s.grad("linear.input", [&s] { return s.normal({4, 5}); },
         [lw, lb](const TensorD& x) { return ops::linear(x, lw, lb); });
  s.grad("linear.weight", [&s] { return s.normal({5, 3}); },
         [lx, lb](const TensorD& wt) { return ops::linear(lx, wt, lb); });
  s.grad("linear.bias", [&s] { return s.normal({3}); },
         [lx, lw](const TensorD& bb) { return ops::linear(lx, lw, bb); });

  TensorD side = s.normal({2, 2, 5, 6});
  s.grad("concat_channels", draw_img,
         [side](const TensorD& x) { return ops::concat_channels<double>({side, x, x}); });
  s.grad("slice_channels", draw_img, [](const TensorD& x) { return ops::slice_channels(x, 1, 2); });
  s.grad("upsample_nearest2x", draw_img, [](const TensorD& x) { return ops::upsample_nearest2x(x); });
  s.grad("avgpool_global", draw_img, [](const TensorD& x) { return ops::avgpool_global(x); });

  TensorD target = s.normal(img, 1.0);
  s.grad("smooth_l1_mean", [&s, img] { return s.normal(img, 1.5); },
         [target](const TensorD& x) { return ops::smooth_l1_mean(x, target); }, true);
  s.grad("l1_mean", draw_img, [target](const TensorD& x) { return ops::l1_mean(x, target); }, true);

  TensorD lab_l = s.uniform({1, 1, 3, 4}, 35.0, 70.0);
  TensorD lab_ab = s.uniform({1, 2, 3, 4}, -20.0, 20.0);
  s.grad("lab_to_rgb.L", [&s] { return s.uniform({1, 1, 3, 4}, 35.0, 70.0); },
         [lab_ab](const TensorD& l) { return lab_to_rgb(l, lab_ab); });
  s.grad("lab_to_rgb.ab", [&s] { return s.uniform({1, 2, 3, 4}, -20.0, 20.0); },
         [lab_l](const TensorD& ab) { return lab_to_rgb(lab_l, ab); });
  s.grad("lab_to_rgb.dark", [&s] { return s.uniform({1, 1, 3, 4}, 1.0, 7.0); },
         [](const TensorD& l) { return lab_to_rgb(l, TensorD({1, 2, 3, 4}, 0.5)); });

  TensorD mw = s.normal({3, 4, 3, 3});
  TensorD sigma = s.normal({2, 4}, 0.5, 1.0);
  s.grad("modulate.weight", [&s] { return s.normal({3, 4, 3, 3}); },
         [sigma](const TensorD& wt) { return modulate(wt, 0.3, sigma); });
  s.grad("modulate.sigma", [&s] { return s.normal({2, 4}, 0.5, 1.0); },
         [mw](const TensorD& sg) { return modulate(mw, 0.3, sg); });
  s.grad("demodulate.out_channel", [&s] { return s.normal({2, 3, 4, 3, 3}); },
         [](const TensorD& wt) { return demodulate(wt, 1e-8, DemodMode::kPerOutputChannel); });
  s.grad("demodulate.in_channel", [&s] { return s.normal({3, 4, 3, 3}); },
         [](const TensorD& wt) { return demodulate(wt, 1e-8, DemodMode::kPerInputChannel); });

  Initializer init(11);
  ResBlock<double> block(init, 3, 3, ops::PadMode::kReplicate, 0.2);
  TensorD rx = s.normal({1, 3, 5, 5});
  s.grad("resblock.input", [&s] { return s.normal({1, 3, 5, 5}); },
         [block](const TensorD& x) { return block.forward(x); });
  s.grad("resblock.conv1_weight", [block] { return block.conv1.weight.detach(); },
         [block, rx](const TensorD& wt) {
           ResBlock<double> copy = block;
           copy.conv1.weight = wt;
           return copy.forward(rx);
         });

  Mlp<double> mlp(init, {4, 6, 3}, 0.2);
  s.grad("mlp.input", [&s] { return s.normal({2, 4}); },
         [mlp](const TensorD& x) { return mlp.forward(x); });

  PffbOptions po;
  po.in_channels = 3;
  po.out_channels = 2;
  po.kernel = 3;
  po.embedding_dim = 8;
  Pffb<double> pffb(init, po);
  TensorD pd = s.normal({2, 3, 4, 4});
  TensorD pz = s.normal({2, 8});
  s.grad("pffb.features", [&s] { return s.normal({2, 3, 4, 4}); },
         [pffb, pz](const TensorD& d) { return pffb.forward(d, pz); });
  s.grad("pffb.embedding", [&s] { return s.normal({2, 8}); },
         [pffb, pd](const TensorD& z) { return pffb.forward(pd, z); });
  s.grad("pffb.weight", [pffb] { return pffb.weight.detach(); },
         [pffb, pd, pz](const TensorD& wt) {
           Pffb<double> copy = pffb;
           copy.weight = wt;
           return copy.forward(pd, pz);
         });

  const ModelConfig tiny = ModelConfig::tiny();
  ColorizationModel<double> model(tiny);
  const std::int64_t sz = tiny.input_size;
  TensorD ref = s.uniform({1, 3, sz, sz}, -1.0, 1.0);
  TensorD luma = s.uniform({1, 1, sz, sz}, -0.6, 0.6);
  s.grad("model.luma", [&s, sz] { return s.uniform({1, 1, sz, sz}, -0.6, 0.6); },
         [model, ref](const TensorD& l) { return model.predict_ab(l, ref); });
  s.grad("model.reference", [&s, sz] { return s.uniform({1, 3, sz, sz}, -1.0, 1.0); },
         [model, luma](const TensorD& r) { return model.predict_ab(luma, r); });

  auto extractor = ConvFeatureExtractor<double>::random(5, {3, 4});
  TensorD tl = s.uniform({1, 1, sz, sz}, 40.0, 65.0);
  TensorD gt_ab = s.uniform({1, 2, sz, sz}, -15.0, 15.0);
  TensorD gt_rgb;
  {
    NoGradScope<double> no_grad;
    gt_rgb = lab_to_rgb(tl, gt_ab);
  }
  auto draw_ab = [&s, gt_ab] { return ops::add(gt_ab, s.normal(gt_ab.shape(), 3.0)).detach(); };
  LossConfig lc;
  s.grad("total_loss", draw_ab,
         [=](const TensorD& ab) { return total_loss(ab, gt_ab, tl, gt_rgb, lc, extractor.get()).total; },
         true);
  LossConfig perc_only = lc;
  perc_only.lambda_rec = 0.0;
  s.grad("total_loss.perceptual_only", draw_ab,
         [=](const TensorD& ab) {
           return total_loss(ab, gt_ab, tl, gt_rgb, perc_only, extractor.get()).total;
         },
         true);
}

void conv_oracle(Suite& s) {
  std::uniform_int_distribution<int> pick(0, 1 << 20);
  double worst = 0.0;
  const int cases = 60;
  for (int c = 0; c < cases; ++c) {
    auto& rng = s.rng();
    const int n = 1 + pick(rng) % 2;
    const int ci = 1 + pick(rng) % 4;
    const int co = 1 + pick(rng) % 5;
    const int k = 1 + 2 * (pick(rng) % 3);
    const int stride = 1 + pick(rng) % 3;
    const int pad = pick(rng) % (k / 2 + 2);
    const int h = k + pick(rng) % 9;
    const int wd = k + pick(rng) % 9;
    const bool replicate = pick(rng) % 2 == 0;
    const bool per_sample = pick(rng) % 4 == 0;
    TensorD x = s.normal({n, ci, h, wd});
    TensorD w = per_sample ? s.normal({n, co, ci, k, k}) : s.normal({co, ci, k, k});
    TensorD b = pick(rng) % 2 ? s.normal({co}) : TensorD();
    ops::Conv2dOptions opts{stride, pad, replicate ? ops::PadMode::kReplicate : ops::PadMode::kZero};
    Shape expected_shape;
    std::vector<double> expected = naive_conv(x, w, b, stride, pad, replicate, expected_shape);
    TensorD got = ops::conv2d(x, w, b, opts);
    if (got.shape() != expected_shape) {
      worst = INFINITY;
      break;
    }
    double scale = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      scale = std::max(scale, std::abs(expected[i]));
      err = std::max(err, std::abs(expected[i] - got.values()[i]));
    }
    worst = std::max(worst, err / std::max(scale, 1e-12));
  }
  s.add("conv", "oracle (" + std::to_string(cases) + " cases)", worst, 1e-5);
}

void color_checks(Suite& s) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    Rgb in{u(s.rng()), u(s.rng()), u(s.rng())};
    Rgb out = lab_to_rgb(rgb_to_lab(in));
    worst = std::max({worst, std::abs(in.r - out.r), std::abs(in.g - out.g), std::abs(in.b - out.b)});
  }
  s.add("color", "rgb->lab->rgb round trip", worst, 1e-4);

  Lab white = rgb_to_lab(Rgb{1.0, 1.0, 1.0});
  s.add("color", "white -> (100,0,0)",
        std::max({std::abs(white.L - 100.0), std::abs(white.a), std::abs(white.b)}), 1e-2);
  Lab red = rgb_to_lab(Rgb{1.0, 0.0, 0.0});
  s.add("color", "red -> (53.24,80.09,67.20)",
        std::max({std::abs(red.L - 53.2408), std::abs(red.a - 80.0925), std::abs(red.b - 67.2032)}),
        1e-2);
}

void tps_checks(Suite& s) {
  std::uniform_real_distribution<double> u(0.0, 64.0);
  std::normal_distribution<double> jitter(0.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> src, dst;
    for (int i = 0; i < 9; ++i) {
      Point p{u(s.rng()), u(s.rng())};
      src.push_back(p);
      dst.push_back({p.x + jitter(s.rng()), p.y + jitter(s.rng())});
    }
    TpsParams params = fit_tps(src, dst, 0.0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      Point q = eval_tps(params, src[i]);
      worst = std::max({worst, std::abs(q.x - dst[i].x), std::abs(q.y - dst[i].y)});
    }
  }
  s.add("tps", "control-point interpolation", worst, 1e-6);

  RgbImage img(17, 23);
  std::uniform_real_distribution<float> v(0.0f, 1.0f);
  for (float& x : img.data()) x = v(s.rng());
  RgbImage same = warp_image(img, TpsParams::identity());
  s.add("tps", "identity warp byte-identical",
        quantize(same) == quantize(img) && same == img ? 0.0 : 1.0, 0.0, true);
  RgbImage zero_offset = warp_image(img, random_tps(s.rng(), 3, 0.0, 17, 23));
  s.add("tps", "zero-offset random warp is identity", zero_offset == img ? 0.0 : 1.0, 0.0, true);

  const int tx = 3, ty = -2;
  std::vector<Point> src{{0, 0}, {22, 0}, {0, 16}, {22, 16}, {11, 8}};
  std::vector<Point> dst;
  for (const Point& p : src) dst.push_back({p.x + tx, p.y + ty});
  RgbImage shifted = warp_image(img, fit_tps(src, dst, 0.0));
  double err = 0.0;
  for (int y = 2; y < 17 - 2; ++y) {
    for (int x = 0; x < 23 - 3; ++x) {
      for (int c = 0; c < 3; ++c) {
        err = std::max(err, static_cast<double>(std::abs(shifted.at(y, x, c) - img.at(y + ty, x + tx, c))));
      }
    }
  }
  s.add("tps", "integer translation matches pixel shift", err, 1e-6);
}

void demod_checks(Suite& s) {
  std::uniform_int_distribution<int> dim(1, 6);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const int co = dim(s.rng()), ci = dim(s.rng()), k = 2 * (dim(s.rng()) % 3) + 1;
    TensorD w = s.normal({co, ci, k, k});
    TensorD sigma = s.normal({2, ci}, 1.0, 0.5);
    TensorD wpp = demodulate(modulate(w, 1.0 / std::sqrt(ci * k * k), sigma), 0.0);
    auto v = wpp.values();
    const std::size_t group = static_cast<std::size_t>(ci * k * k);
    for (std::size_t g = 0; g * group < v.size(); ++g) {
      double n2 = 0.0;
      for (std::size_t i = 0; i < group; ++i) n2 += v[g * group + i] * v[g * group + i];
      worst = std::max(worst, std::abs(std::sqrt(n2) - 1.0));
    }
  }
  s.add("demod", "per-output-channel unit norm (100 draws)", worst, 1e-6);

  Initializer init(3);
  PffbOptions po;
  po.in_channels = 4;
  po.out_channels = 3;
  po.embedding_dim = 8;
  po.eps = 0.0;
  Pffb<double> pffb(init, po);
  TensorD d = s.normal({2, 4, 6, 6});
  TensorD sigma = s.normal({2, 4}, 1.0, 0.5);
  double diff = 0.0;
  for (double c : {0.01, 0.5, 3.0, 250.0}) {
    TensorD a = pffb.forward_with_sigma(d, sigma);
    TensorD b = pffb.forward_with_sigma(d, ops::scale(sigma, c));
    for (std::int64_t i = 0; i < a.numel(); ++i) {
      diff = std::max(diff, std::abs(a.values()[i] - b.values()[i]));
    }
  }
  s.add("demod", "pffb positive-scale invariance", diff, 1e-12, true);
}

void loss_and_optim_checks(Suite& s) {
  double worst = 0.0;
  for (auto [d, expected] : {std::pair{0.5f, 0.125f}, {1.0f, 0.5f}, {2.0f, 1.5f}}) {
    Tensor<float> gt({2, 2, 3, 3}, 0.25f);
    Tensor<float> pred({2, 2, 3, 3}, 0.25f + d);
    const float got = smooth_l1(pred, gt).item();
    worst = std::max(worst, static_cast<double>(std::abs(got - expected)) / expected);
  }
  s.add("loss", "smooth L1 spot values", worst, 4.0 * std::numeric_limits<float>::epsilon(), true);

  std::vector<double> p{0.0}, g{1.0}, m{0.0}, v{0.0};
  AdamOptions o;
  o.lr = 0.1;
  o.eps = 0.0;
  adam_update<double>(p, g, m, v, 1, o);
  s.add("optim", "first Adam step equals -lr", std::abs(p[0] + 0.1), 1e-15, true);
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_result) {
  struct FaultGuard {
    explicit FaultGuard(bool on) { ops::testing::set_broken_tanh_backward(on); }
    ~FaultGuard() { ops::testing::set_broken_tanh_backward(false); }
  } guard(options.inject_fault);
  Suite suite(options, on_result);
  gradient_checks(suite);
  conv_oracle(suite);
  color_checks(suite);
  tps_checks(suite);
  demod_checks(suite);
  loss_and_optim_checks(suite);
  return suite.take();
}

std::string format_check_row(const CheckResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-6s %-44s %-4s %12.3e  (limit %.1e)%s%s", r.group.c_str(),
                r.name.c_str(), r.passed ? "PASS" : "FAIL", r.value, r.threshold,
                r.detail.empty() ? "" : "  ", r.detail.c_str());
  return buf;
}

std::string format_verify_table(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  int failed = 0;
  for (const CheckResult& r : results) {
    os << format_check_row(r) << "\n";
    if (!r.passed) ++failed;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed\n";
  if (failed > 0) {
    os << "failed:";
    for (const CheckResult& r : results) {
      if (!r.passed) os << " " << r.group << "/" << r.name;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace excolor
