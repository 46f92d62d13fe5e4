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

#ifndef TIRVIS_DATASET_HPP
#define TIRVIS_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tirvis/image.hpp"

namespace tirvis::data {

enum class Domain { kThermal, kVisible };

/// Every k-th item starting from the k-th: positions k-1, 2k-1, ...
template <class T>
std::vector<T> subsample_every_k(std::span<const T> items, std::size_t k) {
  if (k < 1) throw std::invalid_argument("subsample_every_k needs k >= 1");
  std::vector<T> out;
  out.reserve(items.size() / k);
  for (std::size_t i = k - 1; i < items.size(); i += k) out.push_back(items[i]);
  return out;
}

/// Resize, then center crop, then optional gray-to-RGB replication.
/// A zero resize extent skips the resize.
struct PrepareOptions {
  int resize_height = 256;
  int resize_width = 320;
  int crop_height = 256;
  int crop_width = 256;
  bool replicate_gray = true;
};

Image prepare_image(const Image& image, const PrepareOptions& options);

/// Ordered image files of one domain. The order is the schedule order: the
/// directory's MANIFEST file when present (one relative path per line),
/// otherwise the *.png files sorted by name.
struct DomainDataset {
  Domain domain = Domain::kThermal;
  std::filesystem::path root;
  std::vector<std::filesystem::path> items;  // relative to root

  static DomainDataset scan(const std::filesystem::path& dir, Domain domain);
  std::size_t size() const { return items.size(); }
};

inline constexpr const char* kManifestName = "MANIFEST";

/// 64-bit FNV-1a digest over the manifest order, file names and bytes.
std::uint64_t dataset_digest(const DomainDataset& dataset);

/// Random access to prepared images.
class ImageSource {
 public:
  virtual ~ImageSource() = default;
  virtual std::size_t size() const = 0;
  virtual Image get(std::size_t index) const = 0;
};

class InMemorySource final : public ImageSource {
 public:
  explicit InMemorySource(std::vector<Image> images) : images_(std::move(images)) {}
  std::size_t size() const override { return images_.size(); }
  Image get(std::size_t index) const override { return images_.at(index); }

 private:
  std::vector<Image> images_;
};

/// Reads and prepares each image on demand.
class DirectorySource final : public ImageSource {
 public:
  DirectorySource(DomainDataset dataset, PrepareOptions options);
  std::size_t size() const override { return dataset_.size(); }
  Image get(std::size_t index) const override;
  const DomainDataset& dataset() const { return dataset_; }

 private:
  DomainDataset dataset_;
  PrepareOptions options_;
};

/// Unpaired schedule: the X side walks a fresh permutation every epoch, the
/// Y side is drawn uniformly with replacement, independently of X. Both are
/// pure functions of (seed, step), so a resumed run continues the exact
/// sequence.
class UnpairedSampler {
 public:
  UnpairedSampler(std::size_t x_count, std::size_t y_count, std::uint64_t seed);

  struct Draw {
    std::size_t x;
    std::size_t y;
  };

  std::size_t steps_per_epoch() const { return x_count_; }
  Draw draw(std::uint64_t step) const;
  std::vector<std::size_t> epoch_order(std::uint64_t epoch) const;

 private:
  std::size_t x_count_;
  std::size_t y_count_;
  std::uint64_t seed_;
  mutable std::uint64_t cached_epoch_ = ~std::uint64_t{0};
  mutable std::vector<std::size_t> cached_order_;
};

}  // namespace tirvis::data

#endif  // TIRVIS_DATASET_HPP
