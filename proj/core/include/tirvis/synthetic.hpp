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

#ifndef TIRVIS_SYNTHETIC_HPP
#define TIRVIS_SYNTHETIC_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tirvis/image.hpp"

namespace tirvis::data {

/// Background plus three object classes.
inline constexpr int kSceneClasses = 4;

/// Label raster of one random scene. Class 1 is a tall ellipse, class 2 a
/// wide rectangle, class 3 a circle; later objects occlude earlier ones.
struct Scene {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> labels;  // row-major
  std::vector<float> ramp;           // per-pixel position in [0, 1] within its class range

  std::uint8_t label(int y, int x) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

Scene make_scene(std::uint64_t seed, std::string_view stream, std::uint64_t index, int height, int width);

/// Closed intensity interval per class. The intervals are disjoint, so the
/// class of every thermal pixel is recoverable from its value alone.
struct TemperatureRange {
  float lo;
  float hi;
};
const std::array<TemperatureRange, kSceneClasses>& temperature_ranges();
const std::array<std::array<float, 3>, kSceneClasses>& class_palette();

/// Single-channel thermal rendering.
Image render_thermal(const Scene& scene);
/// Flat RGB palette rendering.
Image render_palette(const Scene& scene);

/// Class of a thermal intensity by the interval midpoint thresholds.
int thermal_class(float value);
/// Class of an RGB value by nearest palette entry.
int palette_class(float r, float g, float b);

/// Palette rendering of the scene underlying a thermal image (channel 0 is
/// read, so replicated RGB inputs work too).
Image recolor_thermal(const Image& thermal);

struct SyntheticDomains {
  std::vector<Image> x;        // thermal, 1 channel
  std::vector<Image> y;        // palette RGB from independent scenes
  std::vector<Image> x_truth;  // palette rendering of each x scene
};

/// Deterministic per seed. height and width must be positive multiples of 4.
SyntheticDomains gen_synthetic_domains(int n_per_domain, int height, int width, std::uint64_t seed);

/// Paired evaluation split: y[i] is the palette rendering of x[i]'s scene.
SyntheticDomains gen_synthetic_test(int n, int height, int width, std::uint64_t seed);

}  // namespace tirvis::data

#endif  // TIRVIS_SYNTHETIC_HPP
