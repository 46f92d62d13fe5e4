// Copyright 2026 The tirvis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tirvis/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gemm.hpp"

namespace tirvis::diff {
namespace {

using detail::gemm;
using detail::Trans;
using Index = std::int64_t;

[[noreturn]] void shape_error(const std::string& op, const std::string& what) {
  throw std::invalid_argument(op + ": " + what);
}

template <class T>
bool needs_grad(const Tensor<T>& t) {
  return t.defined() && t.requires_grad();
}

// Maps a coordinate on the padded grid back to the source extent, or -1 for
// a zero-padded position.
Index pad_source(Index p, Index n, Index pad, PadMode mode) {
  Index s = p - pad;
  if (s >= 0 && s < n) return s;
  if (mode == PadMode::kZero) return -1;
  if (s < 0) s = -s;
  if (s >= n) s = 2 * (n - 1) - s;
  return s;
}

// Source row/column for every (kernel offset, output position) pair.
std::vector<Index> source_table(Index extent, Index kernel, Index out, int stride, int pad, PadMode mode) {
  std::vector<Index> table(static_cast<std::size_t>(kernel * out));
  for (Index i = 0; i < kernel; ++i) {
    for (Index o = 0; o < out; ++o) table[i * out + o] = pad_source(o * stride + i, extent, pad, mode);
  }
  return table;
}

struct Window {
  Index channels, height, width, kh, kw, out_h, out_w;
  int stride, pad;
  PadMode mode;
};

// col[(c, i, j), (oy, ox)] = padded_src[c, oy * stride + i, ox * stride + j]
template <class T>
void im2col(const T* src, const Window& w, T* col) {
  const auto ys = source_table(w.height, w.kh, w.out_h, w.stride, w.pad, w.mode);
  const auto xs = source_table(w.width, w.kw, w.out_w, w.stride, w.pad, w.mode);
  const Index plane = w.height * w.width;
  const Index cols = w.out_h * w.out_w;
  for (Index c = 0; c < w.channels; ++c) {
    for (Index i = 0; i < w.kh; ++i) {
      for (Index j = 0; j < w.kw; ++j) {
        T* row = col + ((c * w.kh + i) * w.kw + j) * cols;
        const Index* xj = &xs[j * w.out_w];
        for (Index oy = 0; oy < w.out_h; ++oy) {
          T* dst = row + oy * w.out_w;
          const Index sy = ys[i * w.out_h + oy];
          if (sy < 0) {
            std::fill(dst, dst + w.out_w, T(0));
            continue;
          }
          const T* line = src + c * plane + sy * w.width;
          for (Index ox = 0; ox < w.out_w; ++ox) dst[ox] = xj[ox] < 0 ? T(0) : line[xj[ox]];
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-adds every column entry back to its source.
template <class T>
void col2im(const T* col, const Window& w, T* dst) {
  const auto ys = source_table(w.height, w.kh, w.out_h, w.stride, w.pad, w.mode);
  const auto xs = source_table(w.width, w.kw, w.out_w, w.stride, w.pad, w.mode);
  const Index plane = w.height * w.width;
  const Index cols = w.out_h * w.out_w;
  for (Index c = 0; c < w.channels; ++c) {
    for (Index i = 0; i < w.kh; ++i) {
      for (Index j = 0; j < w.kw; ++j) {
        const T* row = col + ((c * w.kh + i) * w.kw + j) * cols;
        const Index* xj = &xs[j * w.out_w];
        for (Index oy = 0; oy < w.out_h; ++oy) {
          const Index sy = ys[i * w.out_h + oy];
          if (sy < 0) continue;
          const T* val = row + oy * w.out_w;
          T* line = dst + c * plane + sy * w.width;
          for (Index ox = 0; ox < w.out_w; ++ox) {
            if (xj[ox] >= 0) line[xj[ox]] += val[ox];
          }
        }
      }
    }
  }
}

// Materialized padded copy [C, H + 2p, W + 2p] and its adjoint.
template <class T>
void pad_planes(const T* src, Index channels, Index h, Index w, int pad, PadMode mode, T* dst) {
  const Index hp = h + 2 * pad, wp = w + 2 * pad;
  std::vector<Index> xs(static_cast<std::size_t>(wp));
  for (Index x = 0; x < wp; ++x) xs[x] = pad_source(x, w, pad, mode);
  for (Index c = 0; c < channels; ++c) {
    for (Index y = 0; y < hp; ++y) {
      T* out = dst + (c * hp + y) * wp;
      const Index sy = pad_source(y, h, pad, mode);
      if (sy < 0) {
        std::fill(out, out + wp, T(0));
        continue;
      }
      const T* line = src + (c * h + sy) * w;
      for (Index x = 0; x < wp; ++x) out[x] = xs[x] < 0 ? T(0) : line[xs[x]];
    }
  }
}

template <class T>
void unpad_planes_add(const T* padded, Index channels, Index h, Index w, int pad, PadMode mode, T* dst) {
  const Index hp = h + 2 * pad, wp = w + 2 * pad;
  std::vector<Index> xs(static_cast<std::size_t>(wp));
  for (Index x = 0; x < wp; ++x) xs[x] = pad_source(x, w, pad, mode);
  for (Index c = 0; c < channels; ++c) {
    for (Index y = 0; y < hp; ++y) {
      const Index sy = pad_source(y, h, pad, mode);
      if (sy < 0) continue;
      const T* in = padded + (c * hp + y) * wp;
      T* line = dst + (c * h + sy) * w;
      for (Index x = 0; x < wp; ++x) {
        if (xs[x] >= 0) line[xs[x]] += in[x];
      }
    }
  }
}

template <class T>
void add_bias(const Tensor<T>& bias, Index channels, Index plane, T* out) {
  if (!bias.defined()) return;
  auto b = bias.data();
  for (Index c = 0; c < channels; ++c) {
    T* p = out + c * plane;
    for (Index i = 0; i < plane; ++i) p[i] += b[c];
  }
}

template <class T>
void accumulate_bias_grad(Tensor<T>& bias, const T* dout, Index channels, Index plane) {
  auto db = bias.grad();
  for (Index c = 0; c < channels; ++c) {
    const T* p = dout + c * plane;
    T s = 0;
    for (Index i = 0; i < plane; ++i) s += p[i];
    db[c] += s;
  }
}

void check_bias(const std::string& op, const Shape& bias, Index channels) {
  if (bias.rank() != 1 || bias[0] != channels) {
    shape_error(op, "bias shape " + bias.str() + " does not match " + std::to_string(channels) + " output channels");
  }
}

bool use_shift_gemm(ConvAlgo algo, int stride, Index filters) {
  switch (algo) {
    case ConvAlgo::kIm2col:
      return false;
    case ConvAlgo::kShiftGemm:
      return true;
    case ConvAlgo::kAuto:
      break;
  }
  // A product with very few output rows runs far below peak; regrouping
  // the kernel taps into rows keeps the matrix product well shaped.
  return stride == 1 && filters <= 8;
}

}  // namespace

template <class T>
Tensor<T> conv2d(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                 const Conv2dOptions& opt, ConvAlgo algo) {
  const std::string op = "conv2d";
  const Shape& xs = input.shape();
  const Shape& ks = kernel.shape();
  if (xs.rank() != 4) shape_error(op, "input must be [N,C,H,W], got " + xs.str());
  if (ks.rank() != 4) shape_error(op, "kernel must be [F,C,kh,kw], got " + ks.str());
  if (ks[1] != xs[1]) {
    shape_error(op, "kernel expects " + std::to_string(ks[1]) + " input channels but input " + xs.str() + " has " +
                        std::to_string(xs[1]));
  }
  if (opt.stride < 1) shape_error(op, "stride must be >= 1");
  if (opt.pad < 0) shape_error(op, "pad must be >= 0");
  const Index n = xs[0], c = xs[1], h = xs[2], w = xs[3];
  const Index f = ks[0], kh = ks[2], kw = ks[3];
  if (bias.defined()) check_bias(op, bias.shape(), f);
  if (kh > h + 2 * opt.pad || kw > w + 2 * opt.pad) {
    shape_error(op, "kernel " + ks.str() + " larger than padded input " + xs.str() + " with pad " +
                        std::to_string(opt.pad));
  }
  if (opt.pad_mode == PadMode::kReflect && (opt.pad >= h || opt.pad >= w)) {
    shape_error(op, "reflection pad " + std::to_string(opt.pad) + " needs spatial extents > pad, got " + xs.str());
  }
  const Index oh = (h + 2 * opt.pad - kh) / opt.stride + 1;
  const Index ow = (w + 2 * opt.pad - kw) / opt.stride + 1;
  const Window win{c, h, w, kh, kw, oh, ow, opt.stride, opt.pad, opt.pad_mode};
  const bool shift = use_shift_gemm(algo, opt.stride, f);
  const Index hp = h + 2 * opt.pad, wp = w + 2 * opt.pad;
  const Index taps = kh * kw;

  // Kernel regrouped as [(f, i, j), c] for the shift path.
  auto regroup_kernel = [=](const T* k) {
    std::vector<T> r(static_cast<std::size_t>(f * taps * c));
    for (Index fi = 0; fi < f; ++fi)
      for (Index ci = 0; ci < c; ++ci)
        for (Index t = 0; t < taps; ++t) r[(fi * taps + t) * c + ci] = k[(fi * c + ci) * taps + t];
    return r;
  };

  const bool rg = needs_grad(input) || needs_grad(kernel) || needs_grad(bias);
  Tensor<T> out(Shape{n, f, oh, ow}, rg);
  auto od = out.data();
  const auto xd = input.data();
  const auto kd = kernel.data();

  if (!shift) {
    std::vector<T> col(static_cast<std::size_t>(c * taps * oh * ow));
    for (Index b = 0; b < n; ++b) {
      im2col(xd.data() + b * c * h * w, win, col.data());
      gemm(Trans::kNo, Trans::kNo, f, oh * ow, c * taps, kd.data(), col.data(), od.data() + b * f * oh * ow, false);
    }
  } else {
    const auto wr = regroup_kernel(kd.data());
    std::vector<T> padded(static_cast<std::size_t>(c * hp * wp));
    std::vector<T> z(static_cast<std::size_t>(f * taps * hp * wp));
    for (Index b = 0; b < n; ++b) {
      pad_planes(xd.data() + b * c * h * w, c, h, w, opt.pad, opt.pad_mode, padded.data());
      gemm(Trans::kNo, Trans::kNo, f * taps, hp * wp, c, wr.data(), padded.data(), z.data(), false);
      T* ob = od.data() + b * f * oh * ow;
      for (Index fi = 0; fi < f; ++fi) {
        T* plane = ob + fi * oh * ow;
        std::fill(plane, plane + oh * ow, T(0));
        for (Index i = 0; i < kh; ++i) {
          for (Index j = 0; j < kw; ++j) {
            const T* zr = z.data() + (fi * taps + i * kw + j) * hp * wp;
            for (Index oy = 0; oy < oh; ++oy) {
              const T* src = zr + (oy + i) * wp + j;
              T* dst = plane + oy * ow;
              for (Index ox = 0; ox < ow; ++ox) dst[ox] += src[ox];
            }
          }
        }
      }
    }
  }
  for (Index b = 0; b < n; ++b) add_bias(bias, f, oh * ow, od.data() + b * f * oh * ow);

  if (rg) {
    g.record("conv2d", [=, input = input, kernel = kernel, bias = bias]() mutable {
      auto dout = out.grad();
      const auto xd = input.data();
      const auto kd = kernel.data();
      if (needs_grad(bias)) {
        for (Index b = 0; b < n; ++b) accumulate_bias_grad(bias, dout.data() + b * f * oh * ow, f, oh * ow);
      }
      const bool want_k = needs_grad(kernel), want_x = needs_grad(input);
      if (!want_k && !want_x) return;
      if (!shift) {
        std::vector<T> col(static_cast<std::size_t>(c * taps * oh * ow));
        for (Index b = 0; b < n; ++b) {
          const T* dob = dout.data() + b * f * oh * ow;
          if (want_k) {
            im2col(xd.data() + b * c * h * w, win, col.data());
            gemm(Trans::kNo, Trans::kYes, f, c * taps, oh * ow, dob, col.data(), kernel.grad().data(), true);
          }
          if (want_x) {
            gemm(Trans::kYes, Trans::kNo, c * taps, oh * ow, f, kd.data(), dob, col.data(), false);
            col2im(col.data(), win, input.grad().data() + b * c * h * w);
          }
        }
        return;
      }
      const auto wr = regroup_kernel(kd.data());
      std::vector<T> dz(static_cast<std::size_t>(f * taps * hp * wp));
      std::vector<T> padded(static_cast<std::size_t>(c * hp * wp));
      std::vector<T> dwr(static_cast<std::size_t>(f * taps * c));
      for (Index b = 0; b < n; ++b) {
        const T* dob = dout.data() + b * f * oh * ow;
        std::fill(dz.begin(), dz.end(), T(0));
        for (Index fi = 0; fi < f; ++fi) {
          for (Index t = 0; t < taps; ++t) {
            const Index i = t / kw, j = t % kw;
            T* zr = dz.data() + (fi * taps + t) * hp * wp;
            for (Index oy = 0; oy < oh; ++oy) {
              const T* src = dob + (fi * oh + oy) * ow;
              std::copy(src, src + ow, zr + (oy + i) * wp + j);
            }
          }
        }
        if (want_k) {
          pad_planes(xd.data() + b * c * h * w, c, h, w, opt.pad, opt.pad_mode, padded.data());
          gemm(Trans::kNo, Trans::kYes, f * taps, c, hp * wp, dz.data(), padded.data(), dwr.data(), false);
          auto dk = kernel.grad();
          for (Index fi = 0; fi < f; ++fi)
            for (Index ci = 0; ci < c; ++ci)
              for (Index t = 0; t < taps; ++t) dk[(fi * c + ci) * taps + t] += dwr[(fi * taps + t) * c + ci];
        }
        if (want_x) {
          gemm(Trans::kYes, Trans::kNo, c, hp * wp, f * taps, wr.data(), dz.data(), padded.data(), false);
          unpad_planes_add(padded.data(), c, h, w, opt.pad, opt.pad_mode, input.grad().data() + b * c * h * w);
        }
      }
    });
  }
  return out;
}

template <class T>
Tensor<T> transpose_conv2d(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                           const TransposeConv2dOptions& opt) {
  const std::string op = "transpose_conv2d";
  const Shape& xs = input.shape();
  const Shape& ks = kernel.shape();
  if (xs.rank() != 4) shape_error(op, "input must be [N,C,H,W], got " + xs.str());
  if (ks.rank() != 4) shape_error(op, "kernel must be [Cin,Cout,kh,kw], got " + ks.str());
  if (ks[0] != xs[1]) {
    shape_error(op, "kernel expects " + std::to_string(ks[0]) + " input channels but input " + xs.str() + " has " +
                        std::to_string(xs[1]));
  }
  if (opt.stride < 1) shape_error(op, "stride must be >= 1");
  if (opt.pad < 0 || opt.output_padding < 0) shape_error(op, "pad and output_padding must be >= 0");
  const Index n = xs[0], cin = xs[1], h = xs[2], w = xs[3];
  const Index cout = ks[1], kh = ks[2], kw = ks[3];
  if (bias.defined()) check_bias(op, bias.shape(), cout);
  const Index fh = (h - 1) * opt.stride + kh, fw = (w - 1) * opt.stride + kw;
  const Index oh = fh - 2 * opt.pad + opt.output_padding;
  const Index ow = fw - 2 * opt.pad + opt.output_padding;
  if (oh < 1 || ow < 1) shape_error(op, "pad " + std::to_string(opt.pad) + " leaves an empty output for " + xs.str());
  // The scatter runs on the unpadded full grid; the output is a window of it.
  const Window win{cout, fh, fw, kh, kw, h, w, opt.stride, 0, PadMode::kZero};
  const Index taps = kh * kw;
  const Index pad = opt.pad;

  const bool rg = needs_grad(input) || needs_grad(kernel) || needs_grad(bias);
  Tensor<T> out(Shape{n, cout, oh, ow}, rg);
  auto od = out.data();
  const auto xd = input.data();
  const auto kd = kernel.data();
  {
    std::vector<T> col(static_cast<std::size_t>(cout * taps * h * w));
    std::vector<T> full(static_cast<std::size_t>(cout * fh * fw));
    for (Index b = 0; b < n; ++b) {
      gemm(Trans::kYes, Trans::kNo, cout * taps, h * w, cin, kd.data(), xd.data() + b * cin * h * w, col.data(),
           false);
      std::fill(full.begin(), full.end(), T(0));
      col2im(col.data(), win, full.data());
      T* ob = od.data() + b * cout * oh * ow;
      for (Index co = 0; co < cout; ++co) {
        for (Index oy = 0; oy < oh; ++oy) {
          for (Index ox = 0; ox < ow; ++ox) {
            const Index fy = oy + pad, fx = ox + pad;
            ob[(co * oh + oy) * ow + ox] = (fy < fh && fx < fw) ? full[(co * fh + fy) * fw + fx] : T(0);
          }
        }
      }
      add_bias(bias, cout, oh * ow, ob);
    }
  }

  if (rg) {
    g.record("transpose_conv2d", [=, input = input, kernel = kernel, bias = bias]() mutable {
      auto dout = out.grad();
      if (needs_grad(bias)) {
        for (Index b = 0; b < n; ++b) accumulate_bias_grad(bias, dout.data() + b * cout * oh * ow, cout, oh * ow);
      }
      const bool want_k = needs_grad(kernel), want_x = needs_grad(input);
      if (!want_k && !want_x) return;
      const auto xd = input.data();
      const auto kd = kernel.data();
      std::vector<T> dfull(static_cast<std::size_t>(cout * fh * fw));
      std::vector<T> dcol(static_cast<std::size_t>(cout * taps * h * w));
      for (Index b = 0; b < n; ++b) {
        const T* dob = dout.data() + b * cout * oh * ow;
        std::fill(dfull.begin(), dfull.end(), T(0));
        for (Index co = 0; co < cout; ++co) {
          for (Index oy = 0; oy < oh; ++oy) {
            for (Index ox = 0; ox < ow; ++ox) {
              const Index fy = oy + pad, fx = ox + pad;
              if (fy < fh && fx < fw) dfull[(co * fh + fy) * fw + fx] = dob[(co * oh + oy) * ow + ox];
            }
          }
        }
        im2col(dfull.data(), win, dcol.data());
        if (want_k) {
          gemm(Trans::kNo, Trans::kYes, cin, cout * taps, h * w, xd.data() + b * cin * h * w, dcol.data(),
               kernel.grad().data(), true);
        }
        if (want_x) {
          gemm(Trans::kNo, Trans::kNo, cin, h * w, cout * taps, kd.data(), dcol.data(),
               input.grad().data() + b * cin * h * w, true);
        }
      }
    });
  }
  return out;
}

template <class T>
Tensor<T> instance_norm(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& scale, const Tensor<T>& shift, T eps) {
  const std::string op = "instance_norm";
  const Shape& xs = input.shape();
  if (xs.rank() != 4) shape_error(op, "input must be [N,C,H,W], got " + xs.str());
  const Index n = xs[0], c = xs[1], plane = xs[2] * xs[3];
  if (scale.shape() != Shape{c} || shift.shape() != Shape{c}) {
    shape_error(op, "scale/shift must be [" + std::to_string(c) + "], got " + scale.shape().str() + " and " +
                        shift.shape().str());
  }
  if (!(eps > T(0))) shape_error(op, "eps must be positive");

  const bool rg = needs_grad(input) || needs_grad(scale) || needs_grad(shift);
  Tensor<T> out(xs, rg);
  std::vector<T> xhat(static_cast<std::size_t>(input.numel()));
  std::vector<T> inv_std(static_cast<std::size_t>(n * c));
  const auto xd = input.data();
  auto od = out.data();
  const auto sc = scale.data();
  const auto sh = shift.data();
  for (Index s = 0; s < n * c; ++s) {
    const T* x = xd.data() + s * plane;
    double mu = 0;
    for (Index i = 0; i < plane; ++i) mu += x[i];
    mu /= static_cast<double>(plane);
    double var = 0;
    for (Index i = 0; i < plane; ++i) {
      const double d = x[i] - mu;
      var += d * d;
    }
    var /= static_cast<double>(plane);
    const T is = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(eps)));
    inv_std[s] = is;
    const Index ch = s % c;
    T* xh = xhat.data() + s * plane;
    T* y = od.data() + s * plane;
    const T m = static_cast<T>(mu);
    for (Index i = 0; i < plane; ++i) {
      xh[i] = (x[i] - m) * is;
      y[i] = sc[ch] * xh[i] + sh[ch];
    }
  }

  if (rg) {
    g.record("instance_norm", [=, input = input, scale = scale, shift = shift, xhat = std::move(xhat), inv_std = std::move(inv_std)]() mutable {
      auto dy = out.grad();
      const auto sc = scale.data();
      const bool want_x = needs_grad(input);
      std::vector<T> gbuf(static_cast<std::size_t>(plane));
      for (Index s = 0; s < n * c; ++s) {
        const Index ch = s % c;
        const T* d = dy.data() + s * plane;
        const T* xh = xhat.data() + s * plane;
        if (needs_grad(shift)) {
          T acc = 0;
          for (Index i = 0; i < plane; ++i) acc += d[i];
          shift.grad()[ch] += acc;
        }
        if (needs_grad(scale)) {
          T acc = 0;
          for (Index i = 0; i < plane; ++i) acc += d[i] * xh[i];
          scale.grad()[ch] += acc;
        }
        if (!want_x) continue;
        double mg = 0, mgx = 0;
        for (Index i = 0; i < plane; ++i) {
          gbuf[i] = d[i] * sc[ch];
          mg += gbuf[i];
          mgx += static_cast<double>(gbuf[i]) * xh[i];
        }
        const T a = static_cast<T>(mg / static_cast<double>(plane));
        const T bx = static_cast<T>(mgx / static_cast<double>(plane));
        T* dx = input.grad().data() + s * plane;
        const T is = inv_std[s];
        for (Index i = 0; i < plane; ++i) dx[i] += is * (gbuf[i] - a - xh[i] * bx);
      }
    });
  }
  return out;
}

template <class T>
Tensor<T> activation(Graph<T>& g, const Tensor<T>& input, Activation act) {
  const bool rg = needs_grad(input);
  Tensor<T> out(input.shape(), rg);
  const auto x = input.data();
  auto y = out.data();
  const T alpha = static_cast<T>(act.alpha);
  switch (act.kind) {
    case ActivationKind::kRelu:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
      break;
    case ActivationKind::kLeakyRelu:
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T(0) ? x[i] : alpha * x[i];
      break;
    case ActivationKind::kTanh: {
      // Saturated inputs would round to exactly +-1; keep the range open.
      const T bound = std::nextafter(T(1), T(0));
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(std::tanh(x[i]), -bound, bound);
      break;
    }
  }
  if (rg) {
    g.record("activation", [=, input = input]() mutable {
      const auto x = input.data();
      const auto y = out.data();
      const auto dy = out.grad();
      auto dx = input.grad();
      switch (act.kind) {
        case ActivationKind::kRelu:
          for (std::size_t i = 0; i < x.size(); ++i) dx[i] += x[i] > T(0) ? dy[i] : T(0);
          break;
        case ActivationKind::kLeakyRelu:
          for (std::size_t i = 0; i < x.size(); ++i) dx[i] += x[i] > T(0) ? dy[i] : alpha * dy[i];
          break;
        case ActivationKind::kTanh:
          for (std::size_t i = 0; i < x.size(); ++i) dx[i] += (T(1) - y[i] * y[i]) * dy[i];
          break;
      }
    });
  }
  return out;
}

namespace {

template <class T>
void check_same_shape(const char* op, const Tensor<T>& a, const Tensor<T>& b) {
  if (!(a.shape() == b.shape())) {
    shape_error(op, "operand shapes differ: " + a.shape().str() + " vs " + b.shape().str());
  }
}

}  // namespace

template <class T>
Tensor<T> add(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b) {
  check_same_shape("add", a, b);
  const bool rg = needs_grad(a) || needs_grad(b);
  Tensor<T> out(a.shape(), rg);
  auto o = out.data();
  const auto x = a.data(), y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] + y[i];
  if (rg) {
    g.record("add", [=, a = a, b = b]() mutable {
      const auto d = out.grad();
      if (needs_grad(a)) {
        auto da = a.grad();
        for (std::size_t i = 0; i < d.size(); ++i) da[i] += d[i];
      }
      if (needs_grad(b)) {
        auto db = b.grad();
        for (std::size_t i = 0; i < d.size(); ++i) db[i] += d[i];
      }
    });
  }
  return out;
}

template <class T>
Tensor<T> sub(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b) {
  check_same_shape("sub", a, b);
  const bool rg = needs_grad(a) || needs_grad(b);
  Tensor<T> out(a.shape(), rg);
  auto o = out.data();
  const auto x = a.data(), y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] - y[i];
  if (rg) {
    g.record("sub", [=, a = a, b = b]() mutable {
      const auto d = out.grad();
      if (needs_grad(a)) {
        auto da = a.grad();
        for (std::size_t i = 0; i < d.size(); ++i) da[i] += d[i];
      }
      if (needs_grad(b)) {
        auto db = b.grad();
        for (std::size_t i = 0; i < d.size(); ++i) db[i] -= d[i];
      }
    });
  }
  return out;
}

template <class T>
Tensor<T> mul(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b) {
  check_same_shape("mul", a, b);
  const bool rg = needs_grad(a) || needs_grad(b);
  Tensor<T> out(a.shape(), rg);
  auto o = out.data();
  const auto x = a.data(), y = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * y[i];
  if (rg) {
    g.record("mul", [=, a = a, b = b]() mutable {
      const auto d = out.grad();
      const auto x = a.data(), y = b.data();
      if (needs_grad(a)) {
        auto da = a.grad();
        for (std::size_t i = 0; i < d.size(); ++i) da[i] += d[i] * y[i];
      }
      if (needs_grad(b)) {
        auto db = b.grad();
        for (std::size_t i = 0; i < d.size(); ++i) db[i] += d[i] * x[i];
      }
    });
  }
  return out;
}

template <class T>
Tensor<T> add_scalar(Graph<T>& g, const Tensor<T>& a, T s) {
  const bool rg = needs_grad(a);
  Tensor<T> out(a.shape(), rg);
  auto o = out.data();
  const auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] + s;
  if (rg) {
    g.record("add_scalar", [=, a = a]() mutable {
      const auto d = out.grad();
      auto da = a.grad();
      for (std::size_t i = 0; i < d.size(); ++i) da[i] += d[i];
    });
  }
  return out;
}

template <class T>
Tensor<T> scale(Graph<T>& g, const Tensor<T>& a, T s) {
  const bool rg = needs_grad(a);
  Tensor<T> out(a.shape(), rg);
  auto o = out.data();
  const auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * s;
  if (rg) {
    g.record("scale", [=, a = a]() mutable {
      const auto d = out.grad();
      auto da = a.grad();
      for (std::size_t i = 0; i < d.size(); ++i) da[i] += d[i] * s;
    });
  }
  return out;
}

template <class T>
Tensor<T> square(Graph<T>& g, const Tensor<T>& a) {
  const bool rg = needs_grad(a);
  Tensor<T> out(a.shape(), rg);
  auto o = out.data();
  const auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] * x[i];
  if (rg) {
    g.record("square", [=, a = a]() mutable {
      const auto d = out.grad();
      const auto x = a.data();
      auto da = a.grad();
      for (std::size_t i = 0; i < d.size(); ++i) da[i] += T(2) * x[i] * d[i];
    });
  }
  return out;
}

template <class T>
Tensor<T> abs(Graph<T>& g, const Tensor<T>& a) {
  const bool rg = needs_grad(a);
  Tensor<T> out(a.shape(), rg);
  auto o = out.data();
  const auto x = a.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::abs(x[i]);
  if (rg) {
    g.record("abs", [=, a = a]() mutable {
      const auto d = out.grad();
      const auto x = a.data();
      auto da = a.grad();
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (x[i] > T(0)) {
          da[i] += d[i];
        } else if (x[i] < T(0)) {
          da[i] -= d[i];
        }
      }
    });
  }
  return out;
}

template <class T>
Tensor<T> sum(Graph<T>& g, const Tensor<T>& a) {
  const bool rg = needs_grad(a);
  T acc = 0;
  for (T v : a.data()) acc += v;
  Tensor<T> out = Tensor<T>::scalar(acc, rg);
  if (rg) {
    g.record("sum", [=, a = a]() mutable {
      const T d = out.grad()[0];
      for (T& v : a.grad()) v += d;
    });
  }
  return out;
}

template <class T>
Tensor<T> mean(Graph<T>& g, const Tensor<T>& a) {
  const bool rg = needs_grad(a);
  const T count = static_cast<T>(a.numel());
  T acc = 0;
  for (T v : a.data()) acc += v;
  Tensor<T> out = Tensor<T>::scalar(acc / count, rg);
  if (rg) {
    g.record("mean", [=, a = a]() mutable {
      const T d = out.grad()[0] / count;
      for (T& v : a.grad()) v += d;
    });
  }
  return out;
}

#define TIRVIS_INSTANTIATE_OPS(T)                                                                                 \
  template Tensor<T> conv2d(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,                      \
                            const Conv2dOptions&, ConvAlgo);                                                      \
  template Tensor<T> transpose_conv2d(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,            \
                                      const TransposeConv2dOptions&);                                             \
  template Tensor<T> instance_norm(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T);           \
  template Tensor<T> activation(Graph<T>&, const Tensor<T>&, Activation);                                         \
  template Tensor<T> add(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                                          \
  template Tensor<T> sub(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                                          \
  template Tensor<T> mul(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                                          \
  template Tensor<T> add_scalar(Graph<T>&, const Tensor<T>&, T);                                                  \
  template Tensor<T> scale(Graph<T>&, const Tensor<T>&, T);                                                       \
  template Tensor<T> square(Graph<T>&, const Tensor<T>&);                                                         \
  template Tensor<T> abs(Graph<T>&, const Tensor<T>&);                                                            \
  template Tensor<T> sum(Graph<T>&, const Tensor<T>&);                                                            \
  template Tensor<T> mean(Graph<T>&, const Tensor<T>&);

TIRVIS_INSTANTIATE_OPS(float)
TIRVIS_INSTANTIATE_OPS(double)

}  // namespace tirvis::diff
