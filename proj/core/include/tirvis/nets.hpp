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

#ifndef TIRVIS_NETS_HPP
#define TIRVIS_NETS_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tirvis/graph.hpp"
#include "tirvis/tensor.hpp"

namespace tirvis::nets {

using diff::Graph;
using diff::Shape;
using diff::Tensor;

struct NamedTensor {
  std::string name;
  Tensor<float> tensor;
};

/// Ordered, name-addressable collection of parameter tensors.
///
/// Unlike a bare Tensor handle, copying a ParameterSet copies the values.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet& other);
  ParameterSet& operator=(const ParameterSet& other);
  ParameterSet(ParameterSet&&) noexcept = default;
  ParameterSet& operator=(ParameterSet&&) noexcept = default;

  Tensor<float>& add(std::string name, Shape shape);

  const Tensor<float>& get(const std::string& name) const;
  Tensor<float>& get(const std::string& name);
  bool contains(const std::string& name) const { return index_.contains(name); }

  std::size_t size() const { return items_.size(); }
  std::int64_t numel() const;
  auto begin() { return items_.begin(); }
  auto end() { return items_.end(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  void set_requires_grad(bool flag);
  void zero_grad();
  void fill(float value);

 private:
  std::vector<NamedTensor> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct GeneratorOptions {
  int residual_blocks = 9;
  int base_channels = 64;
  int in_channels = 3;
  int out_channels = 3;
};

struct DiscriminatorOptions {
  int base_channels = 64;
  int in_channels = 3;
  double leaky_slope = 0.2;
};

/// Residual encoder/decoder: 7x7 stem, two stride-2 downsamplings, residual
/// blocks at 4x base width, two stride-2 transposed convolutions and a 7x7
/// tanh head. Every convolution except the head is instance-normalized and
/// carries no bias of its own.
class GeneratorParams {
 public:
  /// All tensors zero-filled; see init_generator for the trained-from-scratch
  /// starting point.
  explicit GeneratorParams(GeneratorOptions options = {});

  const GeneratorOptions& options() const { return options_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

 private:
  GeneratorOptions options_;
  ParameterSet params_;
};

/// Patch discriminator: three stride-2 4x4 convolutions (64, 128, 256), a
/// stride-1 4x4 to 512 and a stride-1 4x4 to a single score channel, all
/// zero-padded by one. Leaky activations follow every layer but the last.
class DiscriminatorParams {
 public:
  explicit DiscriminatorParams(DiscriminatorOptions options = {});

  const DiscriminatorOptions& options() const { return options_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

 private:
  DiscriminatorOptions options_;
  ParameterSet params_;
};

/// Convolution weights ~ N(0, 0.02^2), biases 0, norm scale 1 and shift 0.
/// Same seed, same parameters, bit for bit.
GeneratorParams init_generator(std::uint64_t seed, GeneratorOptions options = {});
DiscriminatorParams init_discriminator(std::uint64_t seed, DiscriminatorOptions options = {});

/// image: [N, in_channels, H, W] with H and W divisible by 4 and at least 8.
/// Returns [N, out_channels, H, W] with values in (-1, 1).
Tensor<float> generator_forward(Graph<float>& g, const GeneratorParams& params, const Tensor<float>& image);

/// image: [N, in_channels, H, W]. Returns the unbounded score map
/// [N, 1, patch_extent(H), patch_extent(W)].
Tensor<float> discriminator_forward(Graph<float>& g, const DiscriminatorParams& params, const Tensor<float>& image);

/// Output extent of the discriminator for one input extent; 0 when the input
/// is too small to hold a single patch.
std::int64_t patch_extent(std::int64_t input_extent);

/// Smallest input extent that yields at least one patch.
std::int64_t min_discriminator_extent();

}  // namespace tirvis::nets

#endif  // TIRVIS_NETS_HPP
