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

#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "common.hpp"
#include "tirvis/png_io.hpp"
#include "tirvis/synthetic.hpp"

namespace tirvis::cli {

namespace {

std::pair<int, int> parse_size(const std::string& text) {
  int h = 0, w = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%dx%d%c", &h, &w, &tail) == 2) return {h, w};
  if (std::sscanf(text.c_str(), "%d%c", &h, &tail) == 1) return {h, h};
  throw UsageError("--size must be N or HxW, got '" + text + "'");
}

std::string item_name(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05d.png", prefix, i);
  return buf;
}

}  // namespace

int cmd_synth(const SynthArgs& a) {
  const auto [h, w] = parse_size(a.size);
  if (h < 4 || w < 4 || h % 4 != 0 || w % 4 != 0) {
    throw UsageError("--size " + a.size + " must have extents that are positive multiples of 4");
  }
  if (a.n < 1) throw UsageError("--n must be at least 1");
  if (!(a.test_frac >= 0.0 && a.test_frac <= 1.0)) throw UsageError("--test-frac must be in [0, 1]");
  prepare_output_dir(a.out, a.force);

  const auto train = data::gen_synthetic_domains(a.n, h, w, a.seed);
  const int n_test = static_cast<int>(std::lround(a.n * a.test_frac));
  const auto test = data::gen_synthetic_test(n_test, h, w, a.seed);

  namespace fs = std::filesystem;
  for (const char* sub : {"trainX", "trainY", "trainX_truth", "testX", "testY"}) {
    fs::remove_all(a.out / sub);
    fs::create_directories(a.out / sub);
  }
  // Thermal frames as 16-bit gray, visible frames as 8-bit RGB.
  for (int i = 0; i < a.n; ++i) {
    data::write_png(a.out / "trainX" / item_name("x", i), train.x[i], 16);
    data::write_png(a.out / "trainX_truth" / item_name("x", i), train.x_truth[i], 8);
    data::write_png(a.out / "trainY" / item_name("y", i), train.y[i], 8);
  }
  for (int i = 0; i < n_test; ++i) {
    data::write_png(a.out / "testX" / item_name("t", i), test.x[i], 16);
    data::write_png(a.out / "testY" / item_name("t", i), test.y[i], 8);
  }
  info("wrote " + std::to_string(a.n) + " training images per domain and " + std::to_string(n_test) +
       " test pairs (" + std::to_string(h) + "x" + std::to_string(w) + ") to " + a.out.string());
  return kOk;
}

}  // namespace tirvis::cli
