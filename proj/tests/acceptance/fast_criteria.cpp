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

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

#include "criteria.hpp"
#include "support/oracles.hpp"
#include "tirvis/checkpoint.hpp"
#include "tirvis/dataset.hpp"
#include "tirvis/losses.hpp"
#include "tirvis/metrics.hpp"
#include "tirvis/nets.hpp"
#include "tirvis/ops.hpp"
#include "tirvis/synthetic.hpp"
#include "tirvis/trainer.hpp"

namespace tirvis::acceptance {
namespace {

using namespace tirvis::diff;
using data::Image;
using testing::grad_check;
using testing::random_tensor;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------
// Gradient suite

constexpr int kShapesPerOperator = 24;
constexpr double kGradTolerance = 1e-4;

struct OperatorResult {
  std::string name;
  int shapes = 0;
  double worst = 0;
};

// Moves every value at least 0.02 away from 0 so that finite differences
// never straddle the kink of relu, leaky_relu or abs.
void away_from_kinks(Tensor<double>& t) {
  for (auto& v : t.data()) v = std::copysign(0.02 + std::abs(v), v);
}

Outcome gradient_suite() {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto small_shape = [&] { return Shape{pick(1, 2), pick(1, 3), pick(1, 4), pick(1, 4)}; };
  // Scalar loss sum(out * r) with a fixed random weighting r.
  auto weighted = [&](Graph<double>& g, const Tensor<double>& out, const Tensor<double>& r) {
    return sum(g, mul(g, out, r));
  };

  std::vector<OperatorResult> results;
  auto run = [&](const std::string& name, const std::function<double(int)>& trial) {
    OperatorResult r{name, 0, 0};
    for (int i = 0; i < kShapesPerOperator; ++i) {
      r.worst = std::max(r.worst, trial(i));
      ++r.shapes;
    }
    results.push_back(r);
  };

  const auto t0 = Clock::now();

  run("conv2d", [&](int i) {
    const auto n = pick(1, 2), c = pick(1, 3), f = pick(1, 3), h = pick(1, 4), w = pick(1, 4);
    const auto mode = i % 2 ? PadMode::kReflect : PadMode::kZero;
    int pad = pick(0, 1);
    if (mode == PadMode::kReflect && (pad >= h || pad >= w)) pad = 0;
    const int stride = pick(1, 2);
    const int kh = pick(1, std::min(3, h + 2 * pad)), kw = pick(1, std::min(3, w + 2 * pad));
    const int oh = (h + 2 * pad - kh) / stride + 1, ow = (w + 2 * pad - kw) / stride + 1;
    auto x = random_tensor(rng, Shape{n, c, h, w});
    auto k = random_tensor(rng, Shape{f, c, kh, kw});
    const bool with_bias = i % 3 != 0;
    auto b = with_bias ? random_tensor(rng, Shape{f}) : Tensor<double>();
    auto r = random_tensor(rng, Shape{n, f, oh, ow});
    const auto algo = (i / 2) % 2 ? ConvAlgo::kShiftGemm : ConvAlgo::kIm2col;
    std::vector<Tensor<double>> wrt{x, k};
    if (with_bias) wrt.push_back(b);
    return grad_check(
               [&](Graph<double>& g) {
                 return weighted(g, conv2d(g, x, k, b, {.stride = stride, .pad = pad, .pad_mode = mode}, algo), r);
               },
               wrt)
        .worst_relative_error;
  });

  run("transpose_conv2d", [&](int i) {
    int n, cin, cout, h, w, stride, pad, opad, kh, kw, oh, ow;
    do {
      n = pick(1, 2), cin = pick(1, 3), cout = pick(1, 3), h = pick(1, 4), w = pick(1, 4);
      stride = pick(1, 2), pad = pick(0, 1), opad = pick(0, stride - 1), kh = pick(1, 3), kw = pick(1, 3);
      oh = (h - 1) * stride - 2 * pad + kh + opad;
      ow = (w - 1) * stride - 2 * pad + kw + opad;
    } while (oh < 1 || ow < 1);
    auto x = random_tensor(rng, Shape{n, cin, h, w});
    auto k = random_tensor(rng, Shape{cin, cout, kh, kw});
    const bool with_bias = i % 3 != 0;
    auto b = with_bias ? random_tensor(rng, Shape{cout}) : Tensor<double>();
    auto r = random_tensor(rng, Shape{n, cout, oh, ow});
    std::vector<Tensor<double>> wrt{x, k};
    if (with_bias) wrt.push_back(b);
    return grad_check(
               [&](Graph<double>& g) {
                 return weighted(g,
                                 transpose_conv2d(g, x, k, b, {.stride = stride, .pad = pad, .output_padding = opad}),
                                 r);
               },
               wrt)
        .worst_relative_error;
  });

  run("instance_norm", [&](int) {
    const auto s = small_shape();
    auto x = random_tensor(rng, s);
    auto scale_t = random_tensor(rng, Shape{s[1]});
    auto shift_t = random_tensor(rng, Shape{s[1]});
    auto r = random_tensor(rng, s);
    return grad_check([&](Graph<double>& g) { return weighted(g, instance_norm(g, x, scale_t, shift_t), r); },
                      {x, scale_t, shift_t})
        .worst_relative_error;
  });

  auto unary = [&](const std::string& name, bool has_kink, std::function<Tensor<double>(Graph<double>&, const Tensor<double>&)> op) {
    run(name, [&, has_kink, op](int) {
      const auto s = small_shape();
      auto x = random_tensor(rng, s, -2.0, 2.0);
      if (has_kink) away_from_kinks(x);
      auto r = random_tensor(rng, s);
      return grad_check([&](Graph<double>& g) { return weighted(g, op(g, x), r); }, {x}).worst_relative_error;
    });
  };
  unary("relu", true, [](Graph<double>& g, const Tensor<double>& x) { return relu(g, x); });
  unary("leaky_relu", true, [](Graph<double>& g, const Tensor<double>& x) { return leaky_relu(g, x, 0.2); });
  unary("tanh", false, [](Graph<double>& g, const Tensor<double>& x) { return diff::tanh(g, x); });
  unary("square", false, [](Graph<double>& g, const Tensor<double>& x) { return square(g, x); });
  unary("abs", true, [](Graph<double>& g, const Tensor<double>& x) { return diff::abs(g, x); });
  unary("add_scalar", false, [](Graph<double>& g, const Tensor<double>& x) { return add_scalar(g, x, 0.7); });
  unary("scale", false, [](Graph<double>& g, const Tensor<double>& x) { return diff::scale(g, x, -1.3); });

  auto binary = [&](const std::string& name,
                    std::function<Tensor<double>(Graph<double>&, const Tensor<double>&, const Tensor<double>&)> op) {
    run(name, [&, op](int) {
      const auto s = small_shape();
      auto a = random_tensor(rng, s), b = random_tensor(rng, s), r = random_tensor(rng, s);
      return grad_check([&](Graph<double>& g) { return weighted(g, op(g, a, b), r); }, {a, b}).worst_relative_error;
    });
  };
  binary("add", [](Graph<double>& g, const Tensor<double>& a, const Tensor<double>& b) { return add(g, a, b); });
  binary("sub", [](Graph<double>& g, const Tensor<double>& a, const Tensor<double>& b) { return sub(g, a, b); });
  binary("mul", [](Graph<double>& g, const Tensor<double>& a, const Tensor<double>& b) { return mul(g, a, b); });

  auto reduction = [&](const std::string& name, std::function<Tensor<double>(Graph<double>&, const Tensor<double>&)> op) {
    run(name, [&, op](int) {
      auto x = random_tensor(rng, small_shape());
      const double w = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
      // Squaring the reduction keeps the gradient input-dependent.
      return grad_check([&](Graph<double>& g) { return diff::scale(g, square(g, op(g, x)), w); }, {x})
          .worst_relative_error;
    });
  };
  reduction("sum", [](Graph<double>& g, const Tensor<double>& x) { return sum(g, x); });
  reduction("mean", [](Graph<double>& g, const Tensor<double>& x) { return mean(g, x); });

  const double elapsed = seconds_since(t0);
  bool pass = elapsed < 120.0;
  double worst = 0;
  std::string worst_name;
  for (const auto& r : results) {
    pass = pass && r.shapes >= 20 && r.worst < kGradTolerance;
    if (r.worst >= worst) worst = r.worst, worst_name = r.name;
  }
  return {"C1", "gradient suite", pass,
          format("%zu operators x %d shapes, worst rel err %.2e (%s) < %.0e, %.1f s < 120 s", results.size(),
                 kShapesPerOperator, worst, worst_name.c_str(), kGradTolerance, elapsed)};
}

// ---------------------------------------------------------------------------
// Loss oracles

Tensor<double> filled(Shape s, double v) {
  return Tensor<double>(s, std::vector<double>(static_cast<std::size_t>(s.numel()), v));
}

Tensor<double> shifted(const Tensor<double>& t, double d) {
  std::vector<double> v(t.data().begin(), t.data().end());
  for (auto& e : v) e += d;
  return Tensor<double>(t.shape(), std::move(v));
}

double oracle_mean_sq_offset(const Tensor<double>& t, double target) {
  double s = 0;
  for (double v : t.data()) s += (v - target) * (v - target);
  return s / static_cast<double>(t.numel());
}

double oracle_mean_abs_diff(const Tensor<double>& a, const Tensor<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::abs(a.data()[i] - b.data()[i]);
  return s / static_cast<double>(a.numel());
}

Outcome loss_oracles() {
  constexpr double kTol = 1e-6;
  using namespace tirvis::losses;
  int examples = 0, failed_examples = 0;
  auto expect = [&](double got, double want) {
    ++examples;
    if (!(std::abs(got - want) <= kTol)) ++failed_examples;
  };
  const Shape map{2, 1, 3, 3};
  {
    Graph<double> g;
    expect(gen_adv_loss(g, filled(map, 1.0)).item(), 0.0);
    expect(gen_adv_loss(g, filled(map, 0.5)).item(), 0.25);
    expect(gen_adv_loss(g, filled(map, 0.0)).item(), 1.0);
    expect(disc_adv_loss(g, filled(map, 0.0), filled(map, 1.0)).item(), 0.0);
    expect(disc_adv_loss(g, filled(map, 1.0), filled(map, 1.0)).item(), 1.0);
    expect(disc_adv_loss(g, filled(map, 0.5), filled(map, 0.5)).item(), 0.5);
    std::mt19937_64 rng(11);
    auto x = random_tensor(rng, Shape{1, 3, 4, 4}), y = random_tensor(rng, Shape{1, 3, 4, 4});
    expect(cycle_loss(g, x, x, y, y).item(), 0.0);
    expect(cycle_loss(g, x, shifted(x, 0.1), y, y).item(), 0.1);
    expect(cycle_loss(g, x, shifted(x, 0.1), y, shifted(y, -0.2)).item(), 0.3);
  }
  LossReport r;
  r.gen_adv_G = 0.25;
  r.gen_adv_F = 0.25;
  r.cyc = 0.05;
  expect(total_objective(r, 10.0), 1.0);
  expect(total_objective(LossReport{}, 10.0), 0.0);
  expect(total_objective(r, 0.0), r.gen_adv_G + r.gen_adv_F);

  // Random compositions: components from raw arrays, recombined by hand.
  constexpr int kCompositions = 100;
  std::mt19937_64 rng(12345);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int failed_compositions = 0;
  double worst = 0;
  for (int i = 0; i < kCompositions; ++i) {
    const int n = pick(1, 2), p = pick(1, 4), h = pick(2, 4), w = pick(2, 4);
    const double lambda = std::uniform_real_distribution<double>(0.0, 20.0)(rng);
    auto dy_fake = random_tensor(rng, Shape{n, 1, p, p}, -0.5, 1.5);
    auto dx_fake = random_tensor(rng, Shape{n, 1, p, p}, -0.5, 1.5);
    auto dy_real = random_tensor(rng, Shape{n, 1, p, p}, -0.5, 1.5);
    auto x = random_tensor(rng, Shape{n, 3, h, w}), x_rec = random_tensor(rng, Shape{n, 3, h, w});
    auto y = random_tensor(rng, Shape{n, 3, h, w}), y_rec = random_tensor(rng, Shape{n, 3, h, w});

    Graph<double> g;
    const auto gG = gen_adv_loss(g, dy_fake), gF = gen_adv_loss(g, dx_fake);
    const auto cyc = cycle_loss(g, x, x_rec, y, y_rec);
    const double node = generator_objective(g, gG, gF, cyc, lambda).item();
    LossReport rep;
    rep.gen_adv_G = gG.item();
    rep.gen_adv_F = gF.item();
    rep.cyc = cyc.item();
    const double scalar = total_objective(rep, lambda);
    const double disc = disc_adv_loss(g, dy_fake, dy_real).item();

    const double o_gG = oracle_mean_sq_offset(dy_fake, 1.0), o_gF = oracle_mean_sq_offset(dx_fake, 1.0);
    const double o_cyc = oracle_mean_abs_diff(x_rec, x) + oracle_mean_abs_diff(y_rec, y);
    const double o_total = o_gG + o_gF + lambda * o_cyc;
    const double o_disc = oracle_mean_sq_offset(dy_fake, 0.0) + oracle_mean_sq_offset(dy_real, 1.0);
    const double err = std::max({std::abs(rep.gen_adv_G - o_gG), std::abs(rep.gen_adv_F - o_gF),
                                 std::abs(rep.cyc - o_cyc), std::abs(node - o_total), std::abs(scalar - o_total),
                                 std::abs(disc - o_disc)});
    worst = std::max(worst, err);
    if (!(err <= kTol)) ++failed_compositions;
  }
  return {"C2", "loss oracles", failed_examples == 0 && failed_compositions == 0,
          format("%d/%d examples, %d/%d compositions within %.0e (worst %.1e)", examples - failed_examples, examples,
                 kCompositions - failed_compositions, kCompositions, kTol, worst)};
}

// ---------------------------------------------------------------------------
// Metric oracles

std::vector<double> as_doubles(const Image& im) { return {im.values().begin(), im.values().end()}; }

double oracle_l1(const Image& a, const Image& b) {
  const auto va = as_doubles(a), vb = as_doubles(b);
  double s = 0;
  for (std::size_t i = 0; i < va.size(); ++i) s += std::abs(va[i] - vb[i]);
  return s / static_cast<double>(va.size());
}

double oracle_mse(const Image& a, const Image& b) {
  const auto va = as_doubles(a), vb = as_doubles(b);
  double s = 0;
  for (std::size_t i = 0; i < va.size(); ++i) s += (va[i] - vb[i]) * (va[i] - vb[i]);
  return s / static_cast<double>(va.size());
}

// Direct 2-D Gaussian window (not separable), two-pass moments.
double oracle_ssim(const Image& a, const Image& b) {
  constexpr int k = 11;
  constexpr double sigma = 1.5, c1 = 1e-4, c2 = 9e-4;
  double wts[k][k];
  double total = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double di = i - (k - 1) / 2.0, dj = j - (k - 1) / 2.0;
      wts[i][j] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
      total += wts[i][j];
    }
  for (auto& row : wts)
    for (auto& v : row) v /= total;

  double channel_sum = 0;
  for (int c = 0; c < a.channels(); ++c) {
    double s = 0;
    int windows = 0;
    for (int y0 = 0; y0 + k <= a.height(); ++y0)
      for (int x0 = 0; x0 + k <= a.width(); ++x0) {
        double ma = 0, mb = 0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            ma += wts[i][j] * a.at(y0 + i, x0 + j, c);
            mb += wts[i][j] * b.at(y0 + i, x0 + j, c);
          }
        double va = 0, vb = 0, cov = 0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            const double da = a.at(y0 + i, x0 + j, c) - ma, db = b.at(y0 + i, x0 + j, c) - mb;
            va += wts[i][j] * da * da;
            vb += wts[i][j] * db * db;
            cov += wts[i][j] * da * db;
          }
        s += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        ++windows;
      }
    channel_sum += s / windows;
  }
  return channel_sum / a.channels();
}

Outcome metric_oracles() {
  constexpr double kTol = 1e-6, kConstTol = 1e-8;
  constexpr int kPairs = 50;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  double worst = 0;
  int failed = 0;
  for (int p = 0; p < kPairs; ++p) {
    // b mixes a with fresh noise so the pairs span a range of similarity.
    const float t = u(rng);
    Image a(16, 16, 3), b(16, 16, 3);
    for (std::size_t i = 0; i < a.values().size(); ++i) {
      a.values()[i] = u(rng);
      b.values()[i] = std::clamp(t * a.values()[i] + (1 - t) * u(rng), 0.0f, 1.0f);
    }
    const double mse = oracle_mse(a, b);
    const double err = std::max({std::abs(metrics::l1(a, b) - oracle_l1(a, b)),
                                 std::abs(metrics::rmse(a, b) - std::sqrt(mse)),
                                 std::abs(metrics::psnr(a, b) - (-10.0 * std::log10(mse))),
                                 std::abs(metrics::ssim(a, b) - oracle_ssim(a, b))});
    worst = std::max(worst, err);
    if (!(err <= kTol)) ++failed;
  }

  // Constant images: every variance and covariance is zero, leaving the
  // luminance term (2ab + C1) / (a^2 + b^2 + C1).
  double worst_const = 0;
  const std::pair<float, float> levels[] = {{0.0f, 1.0f}, {0.2f, 0.7f}, {0.5f, 0.5f}, {1.0f, 0.3f}, {0.05f, 0.0f}};
  for (const auto& [la, lb] : levels) {
    const Image a(16, 16, 3, la), b(16, 16, 3, lb);
    const double da = la, db = lb, c1 = 1e-4;
    const double closed = (2 * da * db + c1) / (da * da + db * db + c1);
    worst_const = std::max(worst_const, std::abs(metrics::ssim(a, b) - closed));
  }
  const bool pass = failed == 0 && worst_const <= kConstTol;
  return {"C3", "metric oracles", pass,
          format("%d/%d random pairs within %.0e (worst %.1e); constant-image ssim err %.1e <= %.0e",
                 kPairs - failed, kPairs, kTol, worst, worst_const, kConstTol)};
}

// ---------------------------------------------------------------------------
// Architecture shape law

// 4x4 kernels, pad 1, strides 2, 2, 2, 1, 1.
std::int64_t oracle_patch_extent(std::int64_t n) {
  for (int stride : {2, 2, 2, 1, 1}) {
    if (n + 2 < 4) return 0;
    n = (n + 2 - 4) / stride + 1;
  }
  return n;
}

Outcome shape_law() {
  const std::int64_t extents[] = {70, 128, 192, 256};
  int disc_checked = 0, disc_failed = 0;
  const auto disc = nets::init_discriminator(1);
  for (auto h : extents)
    for (auto w : extents) {
      Graph<float> g;
      const auto out = nets::discriminator_forward(g, disc, Tensor<float>(Shape{1, 3, h, w}));
      const Shape want{1, 1, oracle_patch_extent(h), oracle_patch_extent(w)};
      ++disc_checked;
      if (!(out.shape() == want) || nets::patch_extent(h) != want[2] || nets::patch_extent(w) != want[3]) {
        ++disc_failed;
      }
    }

  // Full width at the two reference configurations, then every multiple of 4
  // at reduced width (the spatial arithmetic does not depend on width).
  int gen_checked = 0, gen_failed = 0;
  auto check_generator = [&](const nets::GeneratorParams& G, std::int64_t s) {
    Tensor<float> x(Shape{1, 3, s, s});
    for (std::size_t i = 0; i < x.data().size(); ++i) x.data()[i] = std::sin(0.37f * static_cast<float>(i));
    Graph<float> g;
    const auto out = nets::generator_forward(g, G, x);
    ++gen_checked;
    if (!(out.shape() == x.shape())) ++gen_failed;
  };
  check_generator(nets::init_generator(2, {.residual_blocks = 6}), 64);
  check_generator(nets::init_generator(2, {.residual_blocks = 9}), 256);
  const auto narrow = nets::init_generator(3, {.residual_blocks = 9, .base_channels = 8});
  for (std::int64_t s = 64; s <= 256; s += 4) check_generator(narrow, s);

  return {"C4", "architecture shape law", disc_failed == 0 && gen_failed == 0,
          format("discriminator %d/%d patch maps (70->%lld, 256->%lld); generator %d/%d shapes preserved",
                 disc_checked - disc_failed, disc_checked, static_cast<long long>(oracle_patch_extent(70)),
                 static_cast<long long>(oracle_patch_extent(256)), gen_checked - gen_failed, gen_checked)};
}

// ---------------------------------------------------------------------------
// Pipeline counts

Outcome pipeline_counts() {
  std::vector<std::size_t> indices(33399);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  const auto kept = data::subsample_every_k<std::size_t>(indices, 4);
  const bool pass = kept.size() == 8349 && kept.front() == 3 && kept.back() == 33395;
  return {"C7", "pipeline counts", pass, format("33399 -> %zu with k=4 (want 8349)", kept.size())};
}

// ---------------------------------------------------------------------------
// Checkpoint portability

// Reads the little-endian layout byte by byte, independent of host order and
// of the library's own decoder.
class LeReader {
 public:
  explicit LeReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint64_t uint(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += width;
    return v;
  }
  std::string text(std::size_t n) {
    need(n);
    std::string s(bytes_.begin() + pos_, bytes_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("checkpoint truncated");
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

struct RawRecord {
  std::vector<std::int64_t> extents;
  int dtype = 0;
  std::vector<float> f32;
};

std::map<std::string, RawRecord> read_checkpoint_independently(const std::vector<std::uint8_t>& bytes,
                                                               std::string* config_text) {
  LeReader in(bytes);
  if (in.text(8) != std::string("TIRCGAN\0", 8)) throw std::runtime_error("bad magic");
  if (in.uint(4) != 1) throw std::runtime_error("unexpected version");
  *config_text = in.text(in.uint(4));
  const auto count = in.uint(4);
  std::map<std::string, RawRecord> records;
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto name = in.text(in.uint(4));
    RawRecord rec;
    rec.dtype = static_cast<int>(in.uint(1));
    const auto rank = in.uint(1);
    std::uint64_t numel = 1;
    for (std::uint64_t i = 0; i < rank; ++i) {
      rec.extents.push_back(static_cast<std::int64_t>(in.uint(8)));
      numel *= static_cast<std::uint64_t>(rec.extents.back());
    }
    for (std::uint64_t i = 0; i < numel; ++i) {
      if (rec.dtype == 0) {
        rec.f32.push_back(std::bit_cast<float>(static_cast<std::uint32_t>(in.uint(4))));
      } else if (rec.dtype == 1) {
        in.uint(8);
      } else {
        throw std::runtime_error("unknown dtype");
      }
    }
    records.emplace(name, std::move(rec));
  }
  if (!in.at_end()) throw std::runtime_error("trailing bytes");
  return records;
}

std::vector<float> infer(const nets::GeneratorParams& G, const Tensor<float>& x) {
  Graph<float> g;
  const auto out = nets::generator_forward(g, G, x);
  return {out.data().begin(), out.data().end()};
}

bool bit_equal(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

Outcome checkpoint_portability() {
  train::TrainConfig cfg;
  cfg.image_size = 32;
  cfg.resize_height = cfg.resize_width = 0;
  cfg.residual_blocks = 2;
  cfg.generator_channels = cfg.discriminator_channels = 8;
  cfg.buffer_capacity = 4;
  cfg.seed = 5;

  auto domains = data::gen_synthetic_domains(4, 32, 32, 5);
  std::vector<Image> xs;
  for (const auto& im : domains.x) xs.push_back(data::replicate_to_rgb(im));
  const data::InMemorySource src_x(std::move(xs)), src_y(std::move(domains.y));
  auto state = train::TrainState::initialize(cfg);
  train::TrainHooks hooks;
  hooks.on_step = [](const train::StepRecord& r) { return r.step + 1 < 3; };
  train::train(state, {&src_x, &src_y, nullptr}, hooks);

  const auto path = std::filesystem::temp_directory_path() /
                    ("tirvis_acceptance_" + std::to_string(::getpid()) + ".ckpt");
  train::save_checkpoint(state, path);
  std::ifstream f(path, std::ios::binary);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  f.close();

  const Tensor<float> probe = data::to_network(data::replicate_to_rgb(src_x.get(1)));
  const auto reference = infer(state.models.G, probe);

  std::string detail;
  bool pass = false;
  try {
    std::string config_text;
    const auto records = read_checkpoint_independently(bytes, &config_text);
    const auto stored = train::TrainConfig::from_text(config_text);
    nets::GeneratorParams rebuilt({.residual_blocks = stored.residual_blocks,
                                   .base_channels = stored.generator_channels});
    std::size_t copied = 0;
    for (auto& [name, tensor] : rebuilt.parameters()) {
      const auto& rec = records.at("G." + name);
      if (rec.dtype != 0 || rec.extents != std::vector<std::int64_t>(tensor.shape().extents().begin(),
                                                                     tensor.shape().extents().end())) {
        throw std::runtime_error("record G." + name + " has the wrong shape");
      }
      std::copy(rec.f32.begin(), rec.f32.end(), tensor.data().begin());
      ++copied;
    }
    const auto from_independent = infer(rebuilt, probe);
    const auto from_library = infer(train::load_checkpoint(path).models.G, probe);
    pass = bit_equal(reference, from_independent) && bit_equal(reference, from_library);
    detail = format("%zu records (%zu bytes) decoded as little-endian; inference bit-identical: %s",
                    records.size(), bytes.size(), pass ? "yes" : "no");
  } catch (const std::exception& e) {
    detail = std::string("independent reader failed: ") + e.what();
  }
  std::filesystem::remove(path);
  return {"C8", "checkpoint portability", pass, detail};
}

}  // namespace

std::vector<Outcome> run_fast_criteria() {
  std::vector<Outcome> out;
  out.push_back(gradient_suite());
  out.push_back(loss_oracles());
  out.push_back(metric_oracles());
  out.push_back(shape_law());
  out.push_back(pipeline_counts());
  out.push_back(checkpoint_portability());
  return out;
}

}  // namespace tirvis::acceptance
