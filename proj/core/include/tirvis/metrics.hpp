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

#ifndef TIRVIS_METRICS_HPP
#define TIRVIS_METRICS_HPP

#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tirvis/image.hpp"

namespace tirvis::metrics {

using data::Image;

/// Reported for identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// All metrics accumulate in double over values assumed in [0, 1].
double l1(const Image& a, const Image& b);
double mse(const Image& a, const Image& b);
double rmse(const Image& a, const Image& b);
/// 10 log10(1 / MSE); kPsnrIdentical when MSE is zero.
double psnr(const Image& a, const Image& b);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double c1 = 1e-4;
  double c2 = 9e-4;
};

/// Mean SSIM over every full window position, per channel, then averaged
/// across channels. Throws when either extent is below the window size.
double ssim(const Image& a, const Image& b, const SsimOptions& options = {});

struct MetricRecord {
  std::string name;
  double l1 = 0;
  double rmse = 0;
  double psnr = 0;
  double ssim = 0;
};

MetricRecord evaluate(const Image& generated, const Image& target, std::string name = {});

struct Summary {
  double mean = 0;
  double std = 0;  // population
  std::size_t count = 0;
};

struct MetricReport {
  std::vector<MetricRecord> records;
  Summary l1, rmse, psnr, ssim;
  std::size_t psnr_identical = 0;  // sentinel records left out of the psnr summary
};

/// Throws on an empty list. Order of records does not affect the summaries.
MetricReport aggregate(std::vector<MetricRecord> records);

/// "mean ± std" with the given number of decimals.
std::string format_summary(const Summary& s, int decimals = 2);

/// Header "path,l1,rmse,psnr,ssim" then one row per record.
void write_csv(std::ostream& out, const MetricReport& report);
/// Table-style block with one line per metric.
void write_summary(std::ostream& out, const MetricReport& report, int decimals = 2);

}  // namespace tirvis::metrics

#endif  // TIRVIS_METRICS_HPP
