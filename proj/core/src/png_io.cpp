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

#include "tirvis/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace tirvis::data {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const std::filesystem::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw PngError("cannot open '" + path.string() + "'");
  return f;
}

void on_png_error(png_structp png, png_const_charp message) {
  auto* buf = static_cast<std::string*>(png_get_error_ptr(png));
  if (buf) *buf = message;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

}  // namespace

Image read_png(const std::filesystem::path& path) {
  File file = open_file(path, "rb");
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw PngError("'" + path.string() + "' is not a PNG file");
  }
  auto message = std::make_unique<std::string>();
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, message.get(), on_png_error, on_png_warning);
  if (!png) throw PngError("libpng allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw PngError("libpng allocation failed");
  }
  // Everything touched after setjmp lives in heap storage owned outside this
  // frame so a longjmp cannot skip a destructor that matters.
  auto rows = std::make_unique<std::vector<png_bytep>>();
  auto pixels = std::make_unique<std::vector<png_byte>>();
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw PngError("failed to decode '" + path.string() + "': " + *message);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth == 16) png_set_swap(png);  // little-endian 16-bit samples in memory
  png_read_update_info(png, info);

  const int height = static_cast<int>(png_get_image_height(png, info));
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int channels = png_get_channels(png, info);
  depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels->resize(stride * height);
  rows->resize(height);
  for (int y = 0; y < height; ++y) (*rows)[y] = pixels->data() + y * stride;
  png_read_image(png, rows->data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels != 1 && channels != 3) {
    throw PngError("'" + path.string() + "' has unsupported channel count " + std::to_string(channels));
  }
  Image image(height, width, channels);
  auto values = image.values();
  const std::size_t count = static_cast<std::size_t>(height) * width * channels;
  if (depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t y = i / (static_cast<std::size_t>(width) * channels);
      const std::size_t off = i % (static_cast<std::size_t>(width) * channels);
      const png_byte* p = pixels->data() + y * stride + 2 * off;
      values[i] = static_cast<float>(p[0] | (p[1] << 8)) / 65535.0f;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t y = i / (static_cast<std::size_t>(width) * channels);
      const std::size_t off = i % (static_cast<std::size_t>(width) * channels);
      values[i] = static_cast<float>(pixels->data()[y * stride + off]) / 255.0f;
    }
  }
  return image;
}

void write_png(const std::filesystem::path& path, const Image& image, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw PngError("bit depth must be 8 or 16");
  if (image.empty()) throw PngError("cannot write an empty image");
  const int h = image.height(), w = image.width(), ch = image.channels();
  const int bytes = bit_depth / 8;
  const double max = bit_depth == 8 ? 255.0 : 65535.0;
  const std::size_t stride = static_cast<std::size_t>(w) * ch * bytes;
  auto pixels = std::make_unique<std::vector<png_byte>>(stride * h);
  auto rows = std::make_unique<std::vector<png_bytep>>(h);
  const auto values = image.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto q = static_cast<unsigned>(std::lround(std::clamp(static_cast<double>(values[i]), 0.0, 1.0) * max));
    if (bytes == 1) {
      (*pixels)[i] = static_cast<png_byte>(q);
    } else {
      (*pixels)[2 * i] = static_cast<png_byte>(q >> 8);  // PNG stores big-endian
      (*pixels)[2 * i + 1] = static_cast<png_byte>(q & 0xFF);
    }
  }
  for (int y = 0; y < h; ++y) (*rows)[y] = pixels->data() + y * stride;

  File file = open_file(path, "wb");
  auto message = std::make_unique<std::string>();
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, message.get(), on_png_error, on_png_warning);
  if (!png) throw PngError("libpng allocation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw PngError("libpng allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw PngError("failed to encode '" + path.string() + "': " + *message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, w, h, bit_depth, ch == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw PngError("failed to write '" + path.string() + "'");
}

}  // namespace tirvis::data
