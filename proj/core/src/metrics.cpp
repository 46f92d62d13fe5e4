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

#include "tirvis/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tirvis::metrics {

namespace {

void check_same(const Image& a, const Image& b, const char* what) {
  if (a.height() != b.height() || a.width() != b.width() || a.channels() != b.channels()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + std::to_string(a.height()) + "x" +
                                std::to_string(a.width()) + "x" + std::to_string(a.channels()) + " vs " +
                                std::to_string(b.height()) + "x" + std::to_string(b.width()) + "x" +
                                std::to_string(b.channels()));
  }
  if (a.empty()) throw std::invalid_argument(std::string(what) + ": empty image");
}

std::vector<double> gaussian_taps(int window, double sigma) {
  std::vector<double> taps(window);
  const double c = (window - 1) / 2.0;
  double total = 0;
  for (int i = 0; i < window; ++i) {
    taps[i] = std::exp(-(i - c) * (i - c) / (2 * sigma * sigma));
    total += taps[i];
  }
  for (auto& t : taps) t /= total;
  return taps;
}

// Valid-mode separable filter of one plane: [h, w] -> [h-k+1, w-k+1].
std::vector<double> filter_valid(const std::vector<double>& plane, int h, int w, const std::vector<double>& taps) {
  const int k = static_cast<int>(taps.size());
  const int oh = h - k + 1, ow = w - k + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int t = 0; t < k; ++t) s += taps[t] * plane[static_cast<std::size_t>(y) * w + x + t];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int t = 0; t < k; ++t) s += taps[t] * rows[static_cast<std::size_t>(y + t) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double total = 0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

}  // namespace

double l1(const Image& a, const Image& b) {
  check_same(a, b, "l1");
  const auto va = a.values(), vb = b.values();
  double s = 0;
  for (std::size_t i = 0; i < va.size(); ++i) s += std::abs(static_cast<double>(va[i]) - vb[i]);
  return s / static_cast<double>(va.size());
}

double mse(const Image& a, const Image& b) {
  check_same(a, b, "mse");
  const auto va = a.values(), vb = b.values();
  double s = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = static_cast<double>(va[i]) - vb[i];
    s += d * d;
  }
  return s / static_cast<double>(va.size());
}

double rmse(const Image& a, const Image& b) { return std::sqrt(mse(a, b)); }

double psnr(const Image& a, const Image& b) {
  const double e = mse(a, b);
  if (e == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(1.0 / e);
}

double ssim(const Image& a, const Image& b, const SsimOptions& o) {
  check_same(a, b, "ssim");
  const int h = a.height(), w = a.width(), ch = a.channels();
  if (h < o.window || w < o.window) {
    throw std::invalid_argument("ssim: image " + std::to_string(h) + "x" + std::to_string(w) +
                                " is smaller than the " + std::to_string(o.window) + "x" +
                                std::to_string(o.window) + " window");
  }
  const auto taps = gaussian_taps(o.window, o.sigma);
  const std::size_t n = static_cast<std::size_t>(h) * w;
  double total = 0;
  for (int c = 0; c < ch; ++c) {
    std::vector<double> pa(n), pb(n), aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = a.values()[i * ch + c];
      pb[i] = b.values()[i * ch + c];
      aa[i] = pa[i] * pa[i];
      bb[i] = pb[i] * pb[i];
      ab[i] = pa[i] * pb[i];
    }
    const auto mu_a = filter_valid(pa, h, w, taps), mu_b = filter_valid(pb, h, w, taps);
    const auto e_aa = filter_valid(aa, h, w, taps), e_bb = filter_valid(bb, h, w, taps);
    const auto e_ab = filter_valid(ab, h, w, taps);
    double plane = 0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
      const double ma = mu_a[i], mb = mu_b[i];
      const double va = e_aa[i] - ma * ma, vb = e_bb[i] - mb * mb, cov = e_ab[i] - ma * mb;
      plane += ((2 * ma * mb + o.c1) * (2 * cov + o.c2)) / ((ma * ma + mb * mb + o.c1) * (va + vb + o.c2));
    }
    total += plane / static_cast<double>(mu_a.size());
  }
  return total / ch;
}

MetricRecord evaluate(const Image& generated, const Image& target, std::string name) {
  return {std::move(name), l1(generated, target), rmse(generated, target), psnr(generated, target),
          ssim(generated, target)};
}

MetricReport aggregate(std::vector<MetricRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no metric records");
  MetricReport report;
  // Sorted values make the floating-point sums independent of record order.
  auto column = [&](auto member, bool skip_sentinel) {
    std::vector<double> v;
    for (const auto& r : records) {
      if (skip_sentinel && r.*member == kPsnrIdentical) continue;
      v.push_back(r.*member);
    }
    std::sort(v.begin(), v.end());
    return summarize(v);
  };
  report.l1 = column(&MetricRecord::l1, false);
  report.rmse = column(&MetricRecord::rmse, false);
  report.psnr = column(&MetricRecord::psnr, true);
  report.ssim = column(&MetricRecord::ssim, false);
  report.psnr_identical = records.size() - report.psnr.count;
  report.records = std::move(records);
  return report;
}

std::string format_summary(const Summary& s, int decimals) {
  if (s.count == 0) return "n/a";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*f ± %.*f", decimals, s.mean, decimals, s.std);
  return buf;
}

void write_csv(std::ostream& out, const MetricReport& report) {
  out << "path,l1,rmse,psnr,ssim\n";
  char buf[160];
  for (const auto& r : report.records) {
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g,%.9g,%.9g\n", r.l1, r.rmse, r.psnr, r.ssim);
    out << r.name << buf;
  }
}

void write_summary(std::ostream& out, const MetricReport& report, int decimals) {
  out << "images: " << report.records.size() << "\n";
  out << "L1:   " << format_summary(report.l1, decimals) << "\n";
  out << "RMSE: " << format_summary(report.rmse, decimals) << "\n";
  out << "PSNR: " << format_summary(report.psnr, decimals);
  if (report.psnr_identical > 0) out << " (" << report.psnr_identical << " identical, excluded)";
  out << "\n";
  out << "SSIM: " << format_summary(report.ssim, decimals) << "\n";
}

}  // namespace tirvis::metrics
