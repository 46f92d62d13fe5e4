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

#ifndef TIRVIS_PNG_IO_HPP
#define TIRVIS_PNG_IO_HPP

#include <filesystem>
#include <stdexcept>

#include "tirvis/image.hpp"

namespace tirvis::data {

class PngError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an 8- or 16-bit grayscale or RGB PNG (palette images are expanded,
/// alpha is dropped) and maps samples to [0, 1] by the type maximum.
Image read_png(const std::filesystem::path& path);

/// Writes a 1- or 3-channel image, quantizing round(v * max) for the given
/// bit depth (8 or 16).
void write_png(const std::filesystem::path& path, const Image& image, int bit_depth = 8);

}  // namespace tirvis::data

#endif  // TIRVIS_PNG_IO_HPP
