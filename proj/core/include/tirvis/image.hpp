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

#ifndef TIRVIS_IMAGE_HPP
#define TIRVIS_IMAGE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "tirvis/tensor.hpp"

namespace tirvis::data {

/// Interleaved H x W x C raster (C is 1 or 3) with values in [0, 1].
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, float fill = 0.0f);
  Image(int height, int width, int channels, std::vector<float> values);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return values_.empty(); }

  float& at(int y, int x, int c) { return values_[index(y, x, c)]; }
  float at(int y, int x, int c) const { return values_[index(y, x, c)]; }
  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> values_;
};

/// Bilinear resampling on pixel centers (source coordinate
/// (dst + 0.5) * scale - 0.5, clamped at the borders).
Image resize_bilinear(const Image& image, int height, int width);

/// Window of the requested size at offset ((H - h) / 2, (W - w) / 2).
Image center_crop(const Image& image, int height, int width);

/// Single-channel images repeated to three channels; three-channel images
/// returned unchanged.
Image replicate_to_rgb(const Image& image);

/// [1, C, H, W] network tensor with v -> 2v - 1.
diff::Tensor<float> to_network(const Image& image);

/// Inverse of to_network for one batch element: u -> (u + 1) / 2, clamped to
/// [0, 1].
Image from_network(const diff::Tensor<float>& tensor, int batch_index = 0);

/// Stacks same-shaped images into one [N, C, H, W] network tensor.
diff::Tensor<float> stack_to_network(std::span<const Image> images);

}  // namespace tirvis::data

#endif  // TIRVIS_IMAGE_HPP
