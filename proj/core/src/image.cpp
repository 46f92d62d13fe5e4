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

#include "tirvis/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tirvis::data {

Image::Image(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || (channels != 1 && channels != 3)) {
    throw std::invalid_argument("image must be at least 1x1 with 1 or 3 channels");
  }
  values_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Image::Image(int height, int width, int channels, std::vector<float> values) : Image(height, width, channels) {
  if (values.size() != values_.size()) {
    throw std::invalid_argument("image " + std::to_string(height) + "x" + std::to_string(width) + "x" +
                                std::to_string(channels) + " needs " + std::to_string(values_.size()) + " values");
  }
  values_ = std::move(values);
}

Image resize_bilinear(const Image& image, int height, int width) {
  if (height < 1 || width < 1) throw std::invalid_argument("resize target must be at least 1x1");
  if (height == image.height() && width == image.width()) return image;
  const int ch = image.channels();
  Image out(height, width, ch);
  const double sy = static_cast<double>(image.height()) / height;
  const double sx = static_cast<double>(image.width()) / width;
  auto sample_axis = [](int dst, double scale, int extent, int* lo, int* hi, double* frac) {
    double src = (dst + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(extent - 1));
    *lo = static_cast<int>(std::floor(src));
    *hi = std::min(*lo + 1, extent - 1);
    *frac = src - *lo;
  };
  for (int y = 0; y < height; ++y) {
    int y0, y1;
    double fy;
    sample_axis(y, sy, image.height(), &y0, &y1, &fy);
    for (int x = 0; x < width; ++x) {
      int x0, x1;
      double fx;
      sample_axis(x, sx, image.width(), &x0, &x1, &fx);
      for (int c = 0; c < ch; ++c) {
        const double top = (1.0 - fx) * image.at(y0, x0, c) + fx * image.at(y0, x1, c);
        const double bottom = (1.0 - fx) * image.at(y1, x0, c) + fx * image.at(y1, x1, c);
        out.at(y, x, c) = std::clamp(static_cast<float>((1.0 - fy) * top + fy * bottom), 0.0f, 1.0f);
      }
    }
  }
  return out;
}

Image center_crop(const Image& image, int height, int width) {
  if (height < 1 || width < 1 || height > image.height() || width > image.width()) {
    throw std::invalid_argument("cannot crop " + std::to_string(image.height()) + "x" +
                                std::to_string(image.width()) + " image to " + std::to_string(height) + "x" +
                                std::to_string(width));
  }
  const int top = (image.height() - height) / 2;
  const int left = (image.width() - width) / 2;
  Image out(height, width, image.channels());
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < image.channels(); ++c) out.at(y, x, c) = image.at(y + top, x + left, c);
  return out;
}

Image replicate_to_rgb(const Image& image) {
  if (image.channels() == 3) return image;
  Image out(image.height(), image.width(), 3);
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = image.at(y, x, 0);
  return out;
}

diff::Tensor<float> to_network(const Image& image) { return stack_to_network(std::span(&image, 1)); }

diff::Tensor<float> stack_to_network(std::span<const Image> images) {
  if (images.empty()) throw std::invalid_argument("cannot stack an empty image list");
  const int h = images[0].height(), w = images[0].width(), ch = images[0].channels();
  diff::Tensor<float> t(diff::Shape{static_cast<std::int64_t>(images.size()), ch, h, w});
  auto d = t.data();
  std::size_t i = 0;
  for (const auto& img : images) {
    if (img.height() != h || img.width() != w || img.channels() != ch) {
      throw std::invalid_argument("cannot stack images of different shapes");
    }
    for (int c = 0; c < ch; ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) d[i++] = 2.0f * img.at(y, x, c) - 1.0f;
  }
  return t;
}

Image from_network(const diff::Tensor<float>& tensor, int batch_index) {
  const auto& s = tensor.shape();
  if (s.rank() != 4 || (s[1] != 1 && s[1] != 3)) {
    throw std::invalid_argument("from_network expects [N,1|3,H,W], got " + s.str());
  }
  if (batch_index < 0 || batch_index >= s[0]) throw std::out_of_range("batch index out of range");
  const int ch = static_cast<int>(s[1]), h = static_cast<int>(s[2]), w = static_cast<int>(s[3]);
  Image out(h, w, ch);
  const auto d = tensor.data();
  std::size_t i = static_cast<std::size_t>(batch_index) * ch * h * w;
  for (int c = 0; c < ch; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(y, x, c) = std::clamp((d[i++] + 1.0f) * 0.5f, 0.0f, 1.0f);
  return out;
}

}  // namespace tirvis::data
