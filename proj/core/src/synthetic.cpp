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

#include "tirvis/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tirvis/random.hpp"

namespace tirvis::data {

namespace {

constexpr std::array<TemperatureRange, kSceneClasses> kRanges{{
    {0.05f, 0.25f},
    {0.80f, 0.95f},
    {0.55f, 0.70f},
    {0.32f, 0.45f},
}};

constexpr std::array<std::array<float, 3>, kSceneClasses> kPalette{{
    {0.45f, 0.55f, 0.35f},
    {0.90f, 0.25f, 0.20f},
    {0.20f, 0.30f, 0.85f},
    {0.95f, 0.85f, 0.20f},
}};

void check_size(int height, int width) {
  if (height < 4 || width < 4 || height % 4 != 0 || width % 4 != 0) {
    throw std::invalid_argument("synthetic image size " + std::to_string(height) + "x" + std::to_string(width) +
                                " must be positive multiples of 4");
  }
}

}  // namespace

const std::array<TemperatureRange, kSceneClasses>& temperature_ranges() { return kRanges; }
const std::array<std::array<float, 3>, kSceneClasses>& class_palette() { return kPalette; }

Scene make_scene(std::uint64_t seed, std::string_view stream, std::uint64_t index, int height, int width) {
  CounterRng rng(derive_key(seed, stream, index));
  Scene s;
  s.height = height;
  s.width = width;
  s.labels.assign(static_cast<std::size_t>(height) * width, 0);
  s.ramp.resize(s.labels.size());
  // Background cools toward the top of the frame.
  for (int y = 0; y < height; ++y) {
    const float r = height > 1 ? static_cast<float>(y) / static_cast<float>(height - 1) : 0.0f;
    std::fill_n(s.ramp.begin() + static_cast<std::ptrdiff_t>(y) * width, width, r);
  }

  const double extent = std::min(height, width);
  const int objects = 1 + static_cast<int>(rng.uniform_index(4));
  for (int o = 0; o < objects; ++o) {
    const int cls = 1 + static_cast<int>(rng.uniform_index(3));
    const double cy = rng.uniform() * height;
    const double cx = rng.uniform() * width;
    const double size = extent * (0.10 + 0.18 * rng.uniform());
    double ay = size, ax = size;
    if (cls == 1) ax = 0.5 * size;
    if (cls == 2) ay = 0.5 * size;
    if (cls == 3) ax = ay = 0.75 * size;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double dy = (y + 0.5 - cy) / ay;
        const double dx = (x + 0.5 - cx) / ax;
        double d;  // normalized distance from the center, 1 on the boundary
        if (cls == 2) {
          d = std::max(std::abs(dy), std::abs(dx));
        } else {
          d = std::sqrt(dy * dy + dx * dx);
        }
        if (d >= 1.0) continue;
        const std::size_t i = static_cast<std::size_t>(y) * width + x;
        s.labels[i] = static_cast<std::uint8_t>(cls);
        s.ramp[i] = static_cast<float>(1.0 - d);  // hottest at the center
      }
    }
  }
  return s;
}

Image render_thermal(const Scene& scene) {
  Image out(scene.height, scene.width, 1);
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& r = kRanges[scene.labels[i]];
    v[i] = r.lo + (r.hi - r.lo) * scene.ramp[i];
  }
  return out;
}

Image render_palette(const Scene& scene) {
  Image out(scene.height, scene.width, 3);
  auto v = out.values();
  for (std::size_t i = 0; i < scene.labels.size(); ++i) {
    const auto& c = kPalette[scene.labels[i]];
    v[3 * i + 0] = c[0];
    v[3 * i + 1] = c[1];
    v[3 * i + 2] = c[2];
  }
  return out;
}

int thermal_class(float value) {
  // Midpoints between adjacent intervals, ascending: bg | c3 | c2 | c1.
  if (value < 0.285f) return 0;
  if (value < 0.50f) return 3;
  if (value < 0.75f) return 2;
  return 1;
}

int palette_class(float r, float g, float b) {
  int best = 0;
  float best_d = INFINITY;
  for (int c = 0; c < kSceneClasses; ++c) {
    const float d = (r - kPalette[c][0]) * (r - kPalette[c][0]) + (g - kPalette[c][1]) * (g - kPalette[c][1]) +
                    (b - kPalette[c][2]) * (b - kPalette[c][2]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Image recolor_thermal(const Image& thermal) {
  Image out(thermal.height(), thermal.width(), 3);
  for (int y = 0; y < thermal.height(); ++y) {
    for (int x = 0; x < thermal.width(); ++x) {
      const auto& c = kPalette[thermal_class(thermal.at(y, x, 0))];
      for (int k = 0; k < 3; ++k) out.at(y, x, k) = c[k];
    }
  }
  return out;
}

SyntheticDomains gen_synthetic_domains(int n_per_domain, int height, int width, std::uint64_t seed) {
  check_size(height, width);
  if (n_per_domain < 0) throw std::invalid_argument("synthetic image count must be non-negative");
  SyntheticDomains d;
  for (int i = 0; i < n_per_domain; ++i) {
    const Scene sx = make_scene(seed, "scene-x", i, height, width);
    d.x.push_back(render_thermal(sx));
    d.x_truth.push_back(render_palette(sx));
    d.y.push_back(render_palette(make_scene(seed, "scene-y", i, height, width)));
  }
  return d;
}

SyntheticDomains gen_synthetic_test(int n, int height, int width, std::uint64_t seed) {
  check_size(height, width);
  if (n < 0) throw std::invalid_argument("synthetic image count must be non-negative");
  SyntheticDomains d;
  for (int i = 0; i < n; ++i) {
    const Scene s = make_scene(seed, "scene-test", i, height, width);
    d.x.push_back(render_thermal(s));
    d.y.push_back(render_palette(s));
    d.x_truth.push_back(d.y.back());
  }
  return d;
}

}  // namespace tirvis::data
