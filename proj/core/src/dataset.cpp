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

#include "tirvis/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "tirvis/png_io.hpp"
#include "tirvis/random.hpp"

namespace tirvis::data {

Image prepare_image(const Image& image, const PrepareOptions& o) {
  Image out = image;
  if (o.resize_height > 0 && o.resize_width > 0) out = resize_bilinear(out, o.resize_height, o.resize_width);
  if (o.crop_height > 0 && o.crop_width > 0) out = center_crop(out, o.crop_height, o.crop_width);
  if (o.replicate_gray) out = replicate_to_rgb(out);
  return out;
}

DomainDataset DomainDataset::scan(const std::filesystem::path& dir, Domain domain) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("dataset directory '" + dir.string() + "' does not exist");
  DomainDataset ds;
  ds.domain = domain;
  ds.root = dir;
  const fs::path manifest = dir / kManifestName;
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      if (!fs::exists(dir / line)) {
        throw std::runtime_error("manifest '" + manifest.string() + "' lists missing file '" + line + "'");
      }
      ds.items.emplace_back(line);
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") ds.items.push_back(entry.path().filename());
    }
    std::sort(ds.items.begin(), ds.items.end());
  }
  return ds;
}

std::uint64_t dataset_digest(const DomainDataset& dataset) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](const char* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(p[i]);
      h *= 0x100000001B3ULL;
    }
  };
  std::vector<char> buf(1 << 16);
  for (const auto& item : dataset.items) {
    const std::string name = item.generic_string();
    feed(name.data(), name.size() + 1);
    std::ifstream in(dataset.root / item, std::ios::binary);
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      feed(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  return h;
}

DirectorySource::DirectorySource(DomainDataset dataset, PrepareOptions options)
    : dataset_(std::move(dataset)), options_(options) {}

Image DirectorySource::get(std::size_t index) const {
  return prepare_image(read_png(dataset_.root / dataset_.items.at(index)), options_);
}

UnpairedSampler::UnpairedSampler(std::size_t x_count, std::size_t y_count, std::uint64_t seed)
    : x_count_(x_count), y_count_(y_count), seed_(seed) {
  if (x_count == 0 || y_count == 0) throw std::invalid_argument("both domains need at least one image");
}

std::vector<std::size_t> UnpairedSampler::epoch_order(std::uint64_t epoch) const {
  std::vector<std::size_t> order(x_count_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(derive_key(seed_, "x-order", epoch));
  for (std::size_t i = x_count_; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
  return order;
}

UnpairedSampler::Draw UnpairedSampler::draw(std::uint64_t step) const {
  const std::uint64_t epoch = step / x_count_;
  if (epoch != cached_epoch_) {
    cached_order_ = epoch_order(epoch);
    cached_epoch_ = epoch;
  }
  CounterRng y_rng(derive_key(seed_, "y-draw", step));
  return {cached_order_[step % x_count_], static_cast<std::size_t>(y_rng.uniform_index(y_count_))};
}

}  // namespace tirvis::data
