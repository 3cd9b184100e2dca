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
#include <atomic>
#include <cmath>

#include <Eigen/Core>

#include "excolor/ops.hpp"

namespace excolor::ops {

namespace testing {

namespace {
std::atomic<bool> g_broken_tanh{false};
}  // namespace

void set_broken_tanh_backward(bool on) { g_broken_tanh.store(on); }
bool broken_tanh_backward() { return g_broken_tanh.load(); }

}  // namespace testing

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>, 0, Eigen::OuterStride<>>;

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (!a.defined() || !b.defined() || a.shape() != b.shape()) {
    throw ArgumentError(std::string(op) + ": shape mismatch " +
                        (a.defined() ? to_string(a.shape()) : "undefined") + " vs " +
                        (b.defined() ? to_string(b.shape()) : "undefined"));
  }
}

template <typename T>
void require_rank(const Tensor<T>& x, int rank, const char* op) {
  if (!x.defined() || x.rank() != rank) {
    throw ArgumentError(std::string(op) + ": expected rank " + std::to_string(rank) +
                        " tensor, got " + (x.defined() ? to_string(x.shape()) : "undefined"));
  }
}

// y = f(x) elementwise; dydx(x, y) gives the local derivative.
template <typename T, typename F, typename D>
Tensor<T> unary(const Tensor<T>& x, F f, D dydx) {
  std::span<const T> xv = x.values();
  std::vector<T> y(xv.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = f(xv[i]);
  const bool rec = autograd::recording<T>({&x});
  Tensor<T> out = autograd::make_result<T>(x.shape(), std::move(y), rec);
  if (rec) {
    autograd::record<T>([x, out, dydx]() {
      if (!out.has_grad()) return;
      std::span<const T> gy = out.grad();
      std::span<const T> xv = x.values();
      std::span<const T> yv = out.values();
      std::vector<T>& gx = x.grad_buffer();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += gy[i] * dydx(xv[i], yv[i]);
    });
  }
  return out;
}

// Zero-padded or edge-replicated patch extraction for output rows
// [row0, row1). col is (Ci*K*K) x ((row1-row0)*Wo), row-major.
template <typename T>
void im2col(const T* x, int ci_count, int h, int w, int k, int stride, int pad, PadMode mode,
            int wo, int row0, int row1, T* col) {
  const int pc = (row1 - row0) * wo;
  for (int ci = 0; ci < ci_count; ++ci) {
    const T* plane = x + static_cast<std::size_t>(ci) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* dst = col + (static_cast<std::size_t>(ci) * k * k + ky * k + kx) * pc;
        for (int oy = row0; oy < row1; ++oy) {
          int iy = oy * stride - pad + ky;
          bool row_inside = iy >= 0 && iy < h;
          if (!row_inside && mode == PadMode::kZero) {
            std::fill(dst, dst + wo, T(0));
            dst += wo;
            continue;
          }
          iy = std::clamp(iy, 0, h - 1);
          const T* src = plane + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            int ix = ox * stride - pad + kx;
            if (ix >= 0 && ix < w) {
              dst[ox] = src[ix];
            } else {
              dst[ox] = mode == PadMode::kZero ? T(0) : src[std::clamp(ix, 0, w - 1)];
            }
          }
          dst += wo;
        }
      }
    }
  }
}

// Adjoint of im2col: scatters column gradients back onto the input plane.
template <typename T>
void col2im(const T* col, int ci_count, int h, int w, int k, int stride, int pad, PadMode mode,
            int wo, int row0, int row1, T* gx) {
  const int pc = (row1 - row0) * wo;
  for (int ci = 0; ci < ci_count; ++ci) {
    T* plane = gx + static_cast<std::size_t>(ci) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* src = col + (static_cast<std::size_t>(ci) * k * k + ky * k + kx) * pc;
        for (int oy = row0; oy < row1; ++oy) {
          int iy = oy * stride - pad + ky;
          bool row_inside = iy >= 0 && iy < h;
          if (!row_inside && mode == PadMode::kZero) {
            src += wo;
            continue;
          }
          iy = std::clamp(iy, 0, h - 1);
          T* dst = plane + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            int ix = ox * stride - pad + kx;
            if (ix >= 0 && ix < w) {
              dst[ix] += src[ox];
            } else if (mode == PadMode::kReplicate) {
              dst[std::clamp(ix, 0, w - 1)] += src[ox];
            }
          }
          src += wo;
        }
      }
    }
  }
}

struct ConvGeometry {
  int n, ci, h, w, co, k, ho, wo;
  bool per_sample;
  int rows_per_chunk;
};

constexpr std::size_t kMaxColumnElements = std::size_t{1} << 23;

}  // namespace

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "add");
  std::span<const T> av = a.values();
  std::span<const T> bv = b.values();
  std::vector<T> y(av.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] + bv[i];
  const bool rec = autograd::recording<T>({&a, &b});
  Tensor<T> out = autograd::make_result<T>(a.shape(), std::move(y), rec);
  if (rec) {
    autograd::record<T>([a, b, out]() {
      if (!out.has_grad()) return;
      std::span<const T> gy = out.grad();
      for (const Tensor<T>* t : {&a, &b}) {
        if (!t->requires_grad()) continue;
        std::vector<T>& g = t->grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  return add(a, scale(b, T(-1)));
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "mul");
  std::span<const T> av = a.values();
  std::span<const T> bv = b.values();
  std::vector<T> y(av.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] * bv[i];
  const bool rec = autograd::recording<T>({&a, &b});
  Tensor<T> out = autograd::make_result<T>(a.shape(), std::move(y), rec);
  if (rec) {
    autograd::record<T>([a, b, out]() {
      if (!out.has_grad()) return;
      std::span<const T> gy = out.grad();
      if (a.requires_grad()) {
        std::vector<T>& ga = a.grad_buffer();
        std::span<const T> bv = b.values();
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gy[i] * bv[i];
      }
      if (b.requires_grad()) {
        std::vector<T>& gb = b.grad_buffer();
        std::span<const T> av = a.values();
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += gy[i] * av[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> scale(const Tensor<T>& x, T c) {
  return unary(x, [c](T v) { return v * c; }, [c](T, T) { return c; });
}

template <typename T>
Tensor<T> add_scalar(const Tensor<T>& x, T c) {
  return unary(x, [c](T v) { return v + c; }, [](T, T) { return T(1); });
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  if (NonSmoothMonitor::current()) {
    for (T v : x.values()) autograd::note_nonsmooth(std::abs(static_cast<double>(v)));
  }
  return unary(
      x, [](T v) { return v > T(0) ? v : T(0); }, [](T v, T) { return v > T(0) ? T(1) : T(0); });
}

template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& x, T alpha) {
  if (NonSmoothMonitor::current()) {
    for (T v : x.values()) autograd::note_nonsmooth(std::abs(static_cast<double>(v)));
  }
  return unary(
      x, [alpha](T v) { return v > T(0) ? v : alpha * v; },
      [alpha](T v, T) { return v > T(0) ? T(1) : alpha; });
}

template <typename T>
Tensor<T> tanh(const Tensor<T>& x) {
  if (testing::broken_tanh_backward()) {
    return unary(x, [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y; });
  }
  return unary(x, [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y * y; });
}

template <typename T>
Tensor<T> sum(const Tensor<T>& x) {
  T total = T(0);
  for (T v : x.values()) total += v;
  const bool rec = autograd::recording<T>({&x});
  Tensor<T> out = autograd::make_result<T>(Shape{}, std::vector<T>{total}, rec);
  if (rec) {
    autograd::record<T>([x, out]() {
      if (!out.has_grad()) return;
      T g = out.grad()[0];
      for (T& v : x.grad_buffer()) v += g;
    });
  }
  return out;
}

template <typename T>
Tensor<T> mean(const Tensor<T>& x) {
  if (x.numel() == 0) throw ArgumentError("mean of empty tensor");
  return scale(sum(x), T(1) / static_cast<T>(x.numel()));
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& bias,
                 const Conv2dOptions& opts) {
  require_rank(x, 4, "conv2d input");
  if (!w.defined() || (w.rank() != 4 && w.rank() != 5)) {
    throw ArgumentError("conv2d: weight must be [Co,Ci,K,K] or [N,Co,Ci,K,K]");
  }
  ConvGeometry g{};
  g.per_sample = w.rank() == 5;
  const int off = g.per_sample ? 1 : 0;
  g.n = static_cast<int>(x.dim(0));
  g.ci = static_cast<int>(x.dim(1));
  g.h = static_cast<int>(x.dim(2));
  g.w = static_cast<int>(x.dim(3));
  g.co = static_cast<int>(w.dim(off));
  g.k = static_cast<int>(w.dim(off + 2));
  if (g.per_sample && w.dim(0) != g.n) {
    throw ArgumentError("conv2d: per-sample weight batch " + std::to_string(w.dim(0)) +
                        " != input batch " + std::to_string(g.n));
  }
  if (w.dim(off + 1) != g.ci) {
    throw ArgumentError("conv2d: weight expects " + std::to_string(w.dim(off + 1)) +
                        " input channels, input has " + std::to_string(g.ci));
  }
  if (w.dim(off + 3) != g.k || g.k % 2 == 0) {
    throw ArgumentError("conv2d: kernel must be square with odd size");
  }
  if (opts.stride < 1 || opts.pad < 0) {
    throw ArgumentError("conv2d: stride must be >= 1 and pad >= 0");
  }
  if (bias.defined() && (bias.rank() != 1 || bias.dim(0) != g.co)) {
    throw ArgumentError("conv2d: bias must be [Co]");
  }
  const int span_h = g.h + 2 * opts.pad - g.k;
  const int span_w = g.w + 2 * opts.pad - g.k;
  if (span_h < 0 || span_w < 0) {
    throw ArgumentError("conv2d: kernel larger than padded input");
  }
  if (opts.pad_mode == PadMode::kReplicate && (g.h < 1 || g.w < 1)) {
    throw ArgumentError("conv2d: replicate padding needs a non-empty input");
  }
  g.ho = span_h / opts.stride + 1;
  g.wo = span_w / opts.stride + 1;
  const std::size_t ckk = static_cast<std::size_t>(g.ci) * g.k * g.k;
  g.rows_per_chunk = static_cast<int>(std::clamp<std::size_t>(
      kMaxColumnElements / std::max<std::size_t>(ckk * g.wo, 1), 1, g.ho));

  const std::size_t in_plane = static_cast<std::size_t>(g.ci) * g.h * g.w;
  const std::size_t out_pixels = static_cast<std::size_t>(g.ho) * g.wo;
  const std::size_t w_sample = static_cast<std::size_t>(g.co) * ckk;

  std::vector<T> y(static_cast<std::size_t>(g.n) * g.co * out_pixels);
  std::vector<T> col(ckk * static_cast<std::size_t>(g.rows_per_chunk) * g.wo);
  const T* xv = x.values().data();
  const T* wv = w.values().data();
  for (int n = 0; n < g.n; ++n) {
    ConstMatMap<T> wm(wv + (g.per_sample ? n * w_sample : 0), g.co, static_cast<Eigen::Index>(ckk),
                      Eigen::OuterStride<>(static_cast<Eigen::Index>(ckk)));
    for (int r0 = 0; r0 < g.ho; r0 += g.rows_per_chunk) {
      const int r1 = std::min(r0 + g.rows_per_chunk, g.ho);
      const int pc = (r1 - r0) * g.wo;
      im2col(xv + n * in_plane, g.ci, g.h, g.w, g.k, opts.stride, opts.pad, opts.pad_mode, g.wo,
             r0, r1, col.data());
      ConstMatMap<T> cm(col.data(), static_cast<Eigen::Index>(ckk), pc, Eigen::OuterStride<>(pc));
      MatMap<T> ym(y.data() + n * g.co * out_pixels + static_cast<std::size_t>(r0) * g.wo, g.co, pc,
                   Eigen::OuterStride<>(static_cast<Eigen::Index>(out_pixels)));
      ym.noalias() = wm * cm;
    }
    if (bias.defined()) {
      std::span<const T> bv = bias.values();
      for (int j = 0; j < g.co; ++j) {
        T* row = y.data() + (static_cast<std::size_t>(n) * g.co + j) * out_pixels;
        for (std::size_t p = 0; p < out_pixels; ++p) row[p] += bv[j];
      }
    }
  }

  const bool rec = autograd::recording<T>({&x, &w, &bias});
  Tensor<T> out = autograd::make_result<T>(Shape{g.n, g.co, g.ho, g.wo}, std::move(y), rec);
  if (rec) {
    autograd::record<T>([x, w, bias, out, g, opts, ckk, in_plane, out_pixels, w_sample]() {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      if (bias.defined() && bias.requires_grad()) {
        std::vector<T>& gb = bias.grad_buffer();
        for (int n = 0; n < g.n; ++n) {
          for (int j = 0; j < g.co; ++j) {
            const T* row = gy + (static_cast<std::size_t>(n) * g.co + j) * out_pixels;
            T acc = T(0);
            for (std::size_t p = 0; p < out_pixels; ++p) acc += row[p];
            gb[j] += acc;
          }
        }
      }
      const bool need_w = w.requires_grad();
      const bool need_x = x.requires_grad();
      if (!need_w && !need_x) return;
      T* gw = need_w ? w.grad_buffer().data() : nullptr;
      T* gx = need_x ? x.grad_buffer().data() : nullptr;
      const T* xv = x.values().data();
      const T* wv = w.values().data();
      std::vector<T> col(ckk * static_cast<std::size_t>(g.rows_per_chunk) * g.wo);
      std::vector<T> dcol(need_x ? col.size() : 0);
      for (int n = 0; n < g.n; ++n) {
        const std::size_t w_off = g.per_sample ? n * w_sample : 0;
        ConstMatMap<T> wm(wv + w_off, g.co, static_cast<Eigen::Index>(ckk),
                          Eigen::OuterStride<>(static_cast<Eigen::Index>(ckk)));
        for (int r0 = 0; r0 < g.ho; r0 += g.rows_per_chunk) {
          const int r1 = std::min(r0 + g.rows_per_chunk, g.ho);
          const int pc = (r1 - r0) * g.wo;
          ConstMatMap<T> gym(gy + n * g.co * out_pixels + static_cast<std::size_t>(r0) * g.wo,
                             g.co, pc, Eigen::OuterStride<>(static_cast<Eigen::Index>(out_pixels)));
          if (need_w) {
            im2col(xv + n * in_plane, g.ci, g.h, g.w, g.k, opts.stride, opts.pad, opts.pad_mode,
                   g.wo, r0, r1, col.data());
            ConstMatMap<T> cm(col.data(), static_cast<Eigen::Index>(ckk), pc,
                              Eigen::OuterStride<>(pc));
            MatMap<T> gwm(gw + w_off, g.co, static_cast<Eigen::Index>(ckk),
                          Eigen::OuterStride<>(static_cast<Eigen::Index>(ckk)));
            gwm.noalias() += gym * cm.transpose();
          }
          if (need_x) {
            MatMap<T> dcm(dcol.data(), static_cast<Eigen::Index>(ckk), pc,
                          Eigen::OuterStride<>(pc));
            dcm.noalias() = wm.transpose() * gym;
            col2im(dcol.data(), g.ci, g.h, g.w, g.k, opts.stride, opts.pad, opts.pad_mode, g.wo,
                   r0, r1, gx + n * in_plane);
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  require_rank(x, 2, "linear input");
  require_rank(w, 2, "linear weight");
  const Eigen::Index n = x.dim(0);
  const Eigen::Index d = x.dim(1);
  const Eigen::Index e = w.dim(1);
  if (w.dim(0) != d) {
    throw ArgumentError("linear: input width " + std::to_string(d) + " != weight rows " +
                        std::to_string(w.dim(0)));
  }
  if (b.defined() && (b.rank() != 1 || b.dim(0) != e)) {
    throw ArgumentError("linear: bias must be [E]");
  }
  std::vector<T> y(static_cast<std::size_t>(n * e));
  ConstMatMap<T> xm(x.values().data(), n, d, Eigen::OuterStride<>(d));
  ConstMatMap<T> wm(w.values().data(), d, e, Eigen::OuterStride<>(e));
  MatMap<T> ym(y.data(), n, e, Eigen::OuterStride<>(e));
  ym.noalias() = xm * wm;
  if (b.defined()) {
    std::span<const T> bv = b.values();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < e; ++j) y[i * e + j] += bv[j];
    }
  }
  const bool rec = autograd::recording<T>({&x, &w, &b});
  Tensor<T> out = autograd::make_result<T>(Shape{n, e}, std::move(y), rec);
  if (rec) {
    autograd::record<T>([x, w, b, out, n, d, e]() {
      if (!out.has_grad()) return;
      ConstMatMap<T> gym(out.grad().data(), n, e, Eigen::OuterStride<>(e));
      if (x.requires_grad()) {
        ConstMatMap<T> wm(w.values().data(), d, e, Eigen::OuterStride<>(e));
        MatMap<T> gxm(x.grad_buffer().data(), n, d, Eigen::OuterStride<>(d));
        gxm.noalias() += gym * wm.transpose();
      }
      if (w.requires_grad()) {
        ConstMatMap<T> xm(x.values().data(), n, d, Eigen::OuterStride<>(d));
        MatMap<T> gwm(w.grad_buffer().data(), d, e, Eigen::OuterStride<>(e));
        gwm.noalias() += xm.transpose() * gym;
      }
      if (b.defined() && b.requires_grad()) {
        std::vector<T>& gb = b.grad_buffer();
        std::span<const T> gy = out.grad();
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index j = 0; j < e; ++j) gb[j] += gy[i * e + j];
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> concat_channels(const std::vector<Tensor<T>>& parts) {
  if (parts.empty()) throw ArgumentError("concat_channels: no inputs");
  for (const Tensor<T>& p : parts) require_rank(p, 4, "concat_channels");
  const std::int64_t n = parts[0].dim(0);
  const std::int64_t h = parts[0].dim(2);
  const std::int64_t wd = parts[0].dim(3);
  std::int64_t c_total = 0;
  for (const Tensor<T>& p : parts) {
    if (p.dim(0) != n || p.dim(2) != h || p.dim(3) != wd) {
      throw ArgumentError("concat_channels: incompatible shapes " + to_string(parts[0].shape()) +
                          " and " + to_string(p.shape()));
    }
    c_total += p.dim(1);
  }
  const std::size_t plane = static_cast<std::size_t>(h * wd);
  std::vector<T> y(static_cast<std::size_t>(n * c_total) * plane);
  std::int64_t c_off = 0;
  for (const Tensor<T>& p : parts) {
    const std::int64_t c = p.dim(1);
    for (std::int64_t b = 0; b < n; ++b) {
      const T* src = p.values().data() + static_cast<std::size_t>(b * c) * plane;
      std::copy(src, src + c * plane, y.data() + static_cast<std::size_t>(b * c_total + c_off) * plane);
    }
    c_off += c;
  }
  const bool rec = autograd::recording<T>(parts);
  Tensor<T> out = autograd::make_result<T>(Shape{n, c_total, h, wd}, std::move(y), rec);
  if (rec) {
    autograd::record<T>([parts, out, n, c_total, plane]() {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      std::int64_t c_off = 0;
      for (const Tensor<T>& p : parts) {
        const std::int64_t c = p.dim(1);
        if (p.requires_grad()) {
          std::vector<T>& gp = p.grad_buffer();
          for (std::int64_t b = 0; b < n; ++b) {
            const T* src = gy + static_cast<std::size_t>(b * c_total + c_off) * plane;
            T* dst = gp.data() + static_cast<std::size_t>(b * c) * plane;
            for (std::size_t i = 0; i < c * plane; ++i) dst[i] += src[i];
          }
        }
        c_off += c;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, std::int64_t begin, std::int64_t count) {
  require_rank(x, 4, "slice_channels");
  const std::int64_t n = x.dim(0);
  const std::int64_t c = x.dim(1);
  if (begin < 0 || count < 0 || begin + count > c) {
    throw ArgumentError("slice_channels: range out of bounds");
  }
  const std::size_t plane = static_cast<std::size_t>(x.dim(2) * x.dim(3));
  std::vector<T> y(static_cast<std::size_t>(n * count) * plane);
  for (std::int64_t b = 0; b < n; ++b) {
    const T* src = x.values().data() + static_cast<std::size_t>(b * c + begin) * plane;
    std::copy(src, src + count * plane, y.data() + static_cast<std::size_t>(b * count) * plane);
  }
  const bool rec = autograd::recording<T>({&x});
  Tensor<T> out =
      autograd::make_result<T>(Shape{n, count, x.dim(2), x.dim(3)}, std::move(y), rec);
  if (rec) {
    autograd::record<T>([x, out, n, c, begin, count, plane]() {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      std::vector<T>& gx = x.grad_buffer();
      for (std::int64_t b = 0; b < n; ++b) {
        T* dst = gx.data() + static_cast<std::size_t>(b * c + begin) * plane;
        const T* src = gy + static_cast<std::size_t>(b * count) * plane;
        for (std::size_t i = 0; i < count * plane; ++i) dst[i] += src[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> upsample_nearest2x(const Tensor<T>& x) {
  require_rank(x, 4, "upsample_nearest2x");
  const std::int64_t nc = x.dim(0) * x.dim(1);
  const std::int64_t h = x.dim(2);
  const std::int64_t w = x.dim(3);
  std::vector<T> y(static_cast<std::size_t>(nc * 4 * h * w));
  const T* xv = x.values().data();
  for (std::int64_t p = 0; p < nc; ++p) {
    for (std::int64_t i = 0; i < 2 * h; ++i) {
      const T* src = xv + (p * h + i / 2) * w;
      T* dst = y.data() + (p * 2 * h + i) * 2 * w;
      for (std::int64_t j = 0; j < 2 * w; ++j) dst[j] = src[j / 2];
    }
  }
  const bool rec = autograd::recording<T>({&x});
  Tensor<T> out =
      autograd::make_result<T>(Shape{x.dim(0), x.dim(1), 2 * h, 2 * w}, std::move(y), rec);
  if (rec) {
    autograd::record<T>([x, out, nc, h, w]() {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      std::vector<T>& gx = x.grad_buffer();
      for (std::int64_t p = 0; p < nc; ++p) {
        for (std::int64_t i = 0; i < 2 * h; ++i) {
          const T* src = gy + (p * 2 * h + i) * 2 * w;
          T* dst = gx.data() + (p * h + i / 2) * w;
          for (std::int64_t j = 0; j < 2 * w; ++j) dst[j / 2] += src[j];
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> avgpool_global(const Tensor<T>& x) {
  require_rank(x, 4, "avgpool_global");
  const std::int64_t nc = x.dim(0) * x.dim(1);
  const std::int64_t plane = x.dim(2) * x.dim(3);
  if (plane == 0) throw ArgumentError("avgpool_global: empty spatial extent");
  std::vector<T> y(static_cast<std::size_t>(nc));
  const T* xv = x.values().data();
  for (std::int64_t p = 0; p < nc; ++p) {
    T acc = T(0);
    for (std::int64_t i = 0; i < plane; ++i) acc += xv[p * plane + i];
    y[p] = acc / static_cast<T>(plane);
  }
  const bool rec = autograd::recording<T>({&x});
  Tensor<T> out = autograd::make_result<T>(Shape{x.dim(0), x.dim(1)}, std::move(y), rec);
  if (rec) {
    autograd::record<T>([x, out, nc, plane]() {
      if (!out.has_grad()) return;
      std::span<const T> gy = out.grad();
      std::vector<T>& gx = x.grad_buffer();
      const T inv = T(1) / static_cast<T>(plane);
      for (std::int64_t p = 0; p < nc; ++p) {
        for (std::int64_t i = 0; i < plane; ++i) gx[p * plane + i] += gy[p] * inv;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, Shape shape) {
  if (excolor::numel(shape) != x.numel()) {
    throw ArgumentError("reshape: cannot view " + to_string(x.shape()) + " as " +
                        to_string(shape));
  }
  std::vector<T> y(x.values().begin(), x.values().end());
  const bool rec = autograd::recording<T>({&x});
  Tensor<T> out = autograd::make_result<T>(std::move(shape), std::move(y), rec);
  if (rec) {
    autograd::record<T>([x, out]() {
      if (!out.has_grad()) return;
      std::span<const T> gy = out.grad();
      std::vector<T>& gx = x.grad_buffer();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += gy[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> smooth_l1_mean(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "smooth_l1");
  std::span<const T> av = a.values();
  std::span<const T> bv = b.values();
  const std::size_t count = av.size();
  if (count == 0) throw ArgumentError("smooth_l1 of empty tensors");
  const bool monitor = NonSmoothMonitor::current() != nullptr;
  T total = T(0);
  for (std::size_t i = 0; i < count; ++i) {
    T d = av[i] - bv[i];
    T ad = std::abs(d);
    if (monitor) autograd::note_nonsmooth(std::abs(static_cast<double>(ad) - 1.0));
    total += ad < T(1) ? T(0.5) * d * d : ad - T(0.5);
  }
  const T inv = T(1) / static_cast<T>(count);
  const bool rec = autograd::recording<T>({&a, &b});
  Tensor<T> out = autograd::make_result<T>(Shape{}, std::vector<T>{total * inv}, rec);
  if (rec) {
    autograd::record<T>([a, b, out, inv]() {
      if (!out.has_grad()) return;
      const T g = out.grad()[0] * inv;
      std::span<const T> av = a.values();
      std::span<const T> bv = b.values();
      auto slope = [&](std::size_t i) {
        T d = av[i] - bv[i];
        if (std::abs(d) < T(1)) return d;
        return d > T(0) ? T(1) : T(-1);
      };
      if (a.requires_grad()) {
        std::vector<T>& ga = a.grad_buffer();
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g * slope(i);
      }
      if (b.requires_grad()) {
        std::vector<T>& gb = b.grad_buffer();
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] -= g * slope(i);
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> l1_mean(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "l1");
  std::span<const T> av = a.values();
  std::span<const T> bv = b.values();
  const std::size_t count = av.size();
  if (count == 0) throw ArgumentError("l1 of empty tensors");
  const bool monitor = NonSmoothMonitor::current() != nullptr;
  T total = T(0);
  for (std::size_t i = 0; i < count; ++i) {
    T ad = std::abs(av[i] - bv[i]);
    if (monitor) autograd::note_nonsmooth(static_cast<double>(ad));
    total += ad;
  }
  const T inv = T(1) / static_cast<T>(count);
  const bool rec = autograd::recording<T>({&a, &b});
  Tensor<T> out = autograd::make_result<T>(Shape{}, std::vector<T>{total * inv}, rec);
  if (rec) {
    autograd::record<T>([a, b, out, inv]() {
      if (!out.has_grad()) return;
      const T g = out.grad()[0] * inv;
      std::span<const T> av = a.values();
      std::span<const T> bv = b.values();
      auto sign = [&](std::size_t i) {
        T d = av[i] - bv[i];
        return d > T(0) ? T(1) : (d < T(0) ? T(-1) : T(0));
      };
      if (a.requires_grad()) {
        std::vector<T>& ga = a.grad_buffer();
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g * sign(i);
      }
      if (b.requires_grad()) {
        std::vector<T>& gb = b.grad_buffer();
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] -= g * sign(i);
      }
    });
  }
  return out;
}

#define EXCOLOR_INSTANTIATE_OPS(T)                                                         \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> sub(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> mul(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> scale(const Tensor<T>&, T);                                           \
  template Tensor<T> add_scalar(const Tensor<T>&, T);                                      \
  template Tensor<T> relu(const Tensor<T>&);                                               \
  template Tensor<T> leaky_relu(const Tensor<T>&, T);                                      \
  template Tensor<T> tanh(const Tensor<T>&);                                               \
  template Tensor<T> sum(const Tensor<T>&);                                                \
  template Tensor<T> mean(const Tensor<T>&);                                               \
  template Tensor<T> conv2d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,          \
                            const Conv2dOptions&);                                         \
  template Tensor<T> linear(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);         \
  template Tensor<T> concat_channels(const std::vector<Tensor<T>>&);                       \
  template Tensor<T> slice_channels(const Tensor<T>&, std::int64_t, std::int64_t);         \
  template Tensor<T> upsample_nearest2x(const Tensor<T>&);                                 \
  template Tensor<T> avgpool_global(const Tensor<T>&);                                     \
  template Tensor<T> reshape(const Tensor<T>&, Shape);                                     \
  template Tensor<T> smooth_l1_mean(const Tensor<T>&, const Tensor<T>&);                   \
  template Tensor<T> l1_mean(const Tensor<T>&, const Tensor<T>&);

EXCOLOR_INSTANTIATE_OPS(float)
EXCOLOR_INSTANTIATE_OPS(double)

#undef EXCOLOR_INSTANTIATE_OPS

}  // namespace excolor::ops
