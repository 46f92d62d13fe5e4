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

#include "tirvis/nets.hpp"

#include <stdexcept>

#include "tirvis/ops.hpp"
#include "tirvis/random.hpp"

namespace tirvis::nets {

using diff::Conv2dOptions;
using diff::PadMode;
using diff::TransposeConv2dOptions;

ParameterSet::ParameterSet(const ParameterSet& other) : index_(other.index_) {
  items_.reserve(other.items_.size());
  for (const auto& item : other.items_) items_.push_back({item.name, item.tensor.clone()});
}

ParameterSet& ParameterSet::operator=(const ParameterSet& other) {
  if (this != &other) {
    ParameterSet copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Tensor<float>& ParameterSet::add(std::string name, Shape shape) {
  if (index_.contains(name)) throw std::invalid_argument("duplicate parameter name '" + name + "'");
  index_.emplace(name, items_.size());
  items_.push_back({std::move(name), Tensor<float>(shape, true)});
  return items_.back().tensor;
}

const Tensor<float>& ParameterSet::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no parameter named '" + name + "'");
  return items_[it->second].tensor;
}

Tensor<float>& ParameterSet::get(const std::string& name) {
  return const_cast<Tensor<float>&>(static_cast<const ParameterSet&>(*this).get(name));
}

std::int64_t ParameterSet::numel() const {
  std::int64_t n = 0;
  for (const auto& item : items_) n += item.tensor.numel();
  return n;
}

void ParameterSet::set_requires_grad(bool flag) {
  for (auto& item : items_) item.tensor.set_requires_grad(flag);
}

void ParameterSet::zero_grad() {
  for (auto& item : items_) item.tensor.zero_grad();
}

void ParameterSet::fill(float value) {
  for (auto& item : items_) {
    for (auto& v : item.tensor.data()) v = value;
  }
}

namespace {

void add_norm(ParameterSet& p, const std::string& prefix, std::int64_t channels) {
  p.add(prefix + ".scale", Shape{channels});
  p.add(prefix + ".shift", Shape{channels});
}

std::string res_name(int block, const char* leaf) { return "res" + std::to_string(block) + "." + leaf; }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void init_set(ParameterSet& params, CounterRng& rng) {
  for (auto& [name, tensor] : params) {
    auto values = tensor.data();
    if (ends_with(name, ".weight")) {
      for (auto& v : values) v = static_cast<float>(0.02 * rng.normal());
    } else if (ends_with(name, ".scale")) {
      std::fill(values.begin(), values.end(), 1.0f);
    } else {
      std::fill(values.begin(), values.end(), 0.0f);
    }
  }
}

Tensor<float> norm_relu(Graph<float>& g, const ParameterSet& p, const std::string& prefix, const Tensor<float>& x) {
  return diff::relu(g, diff::instance_norm(g, x, p.get(prefix + ".scale"), p.get(prefix + ".shift")));
}

const Tensor<float> kNoBias;

}  // namespace

GeneratorParams::GeneratorParams(GeneratorOptions options) : options_(options) {
  if (options.residual_blocks < 0 || options.base_channels < 1 || options.in_channels < 1 ||
      options.out_channels < 1) {
    throw std::invalid_argument("invalid generator options");
  }
  const std::int64_t c = options.base_channels;
  auto& p = params_;
  p.add("stem.weight", Shape{c, options.in_channels, 7, 7});
  add_norm(p, "stem.norm", c);
  p.add("down1.weight", Shape{2 * c, c, 3, 3});
  add_norm(p, "down1.norm", 2 * c);
  p.add("down2.weight", Shape{4 * c, 2 * c, 3, 3});
  add_norm(p, "down2.norm", 4 * c);
  for (int b = 0; b < options.residual_blocks; ++b) {
    p.add(res_name(b, "conv1.weight"), Shape{4 * c, 4 * c, 3, 3});
    add_norm(p, res_name(b, "norm1"), 4 * c);
    p.add(res_name(b, "conv2.weight"), Shape{4 * c, 4 * c, 3, 3});
    add_norm(p, res_name(b, "norm2"), 4 * c);
  }
  // Transposed kernels are laid out [in, out, kh, kw].
  p.add("up1.weight", Shape{4 * c, 2 * c, 3, 3});
  add_norm(p, "up1.norm", 2 * c);
  p.add("up2.weight", Shape{2 * c, c, 3, 3});
  add_norm(p, "up2.norm", c);
  p.add("head.weight", Shape{options.out_channels, c, 7, 7});
  p.add("head.bias", Shape{options.out_channels});
}

DiscriminatorParams::DiscriminatorParams(DiscriminatorOptions options) : options_(options) {
  if (options.base_channels < 1 || options.in_channels < 1) throw std::invalid_argument("invalid discriminator options");
  const std::int64_t c = options.base_channels;
  auto& p = params_;
  p.add("layer1.weight", Shape{c, options.in_channels, 4, 4});
  p.add("layer1.bias", Shape{c});
  p.add("layer2.weight", Shape{2 * c, c, 4, 4});
  add_norm(p, "layer2.norm", 2 * c);
  p.add("layer3.weight", Shape{4 * c, 2 * c, 4, 4});
  add_norm(p, "layer3.norm", 4 * c);
  p.add("layer4.weight", Shape{8 * c, 4 * c, 4, 4});
  add_norm(p, "layer4.norm", 8 * c);
  p.add("head.weight", Shape{1, 8 * c, 4, 4});
  p.add("head.bias", Shape{1});
}

GeneratorParams init_generator(std::uint64_t seed, GeneratorOptions options) {
  GeneratorParams params(options);
  CounterRng rng(derive_key(seed, "generator-init"));
  init_set(params.parameters(), rng);
  return params;
}

DiscriminatorParams init_discriminator(std::uint64_t seed, DiscriminatorOptions options) {
  DiscriminatorParams params(options);
  CounterRng rng(derive_key(seed, "discriminator-init"));
  init_set(params.parameters(), rng);
  return params;
}

Tensor<float> generator_forward(Graph<float>& g, const GeneratorParams& params, const Tensor<float>& image) {
  const auto& opt = params.options();
  const Shape& s = image.shape();
  if (s.rank() != 4 || s[1] != opt.in_channels) {
    throw std::invalid_argument("generator expects [N," + std::to_string(opt.in_channels) + ",H,W] input, got " +
                                s.str());
  }
  const std::int64_t h = s[2], w = s[3];
  if (h % 4 != 0 || w % 4 != 0) {
    throw std::invalid_argument("generator input " + std::to_string(h) + "x" + std::to_string(w) +
                                " must have extents divisible by 4; pad by " + std::to_string((4 - h % 4) % 4) +
                                " rows and " + std::to_string((4 - w % 4) % 4) + " columns");
  }
  if (h < 8 || w < 8) throw std::invalid_argument("generator input must be at least 8x8, got " + s.str());

  const auto& p = params.parameters();
  const Conv2dOptions reflect3{.stride = 1, .pad = 3, .pad_mode = PadMode::kReflect};
  const Conv2dOptions reflect1{.stride = 1, .pad = 1, .pad_mode = PadMode::kReflect};
  const Conv2dOptions down{.stride = 2, .pad = 1, .pad_mode = PadMode::kZero};
  const TransposeConv2dOptions up{.stride = 2, .pad = 1, .output_padding = 1};

  auto x = norm_relu(g, p, "stem.norm", diff::conv2d(g, image, p.get("stem.weight"), kNoBias, reflect3));
  x = norm_relu(g, p, "down1.norm", diff::conv2d(g, x, p.get("down1.weight"), kNoBias, down));
  x = norm_relu(g, p, "down2.norm", diff::conv2d(g, x, p.get("down2.weight"), kNoBias, down));
  for (int b = 0; b < opt.residual_blocks; ++b) {
    auto r = norm_relu(g, p, res_name(b, "norm1"),
                       diff::conv2d(g, x, p.get(res_name(b, "conv1.weight")), kNoBias, reflect1));
    r = diff::conv2d(g, r, p.get(res_name(b, "conv2.weight")), kNoBias, reflect1);
    r = diff::instance_norm(g, r, p.get(res_name(b, "norm2.scale")), p.get(res_name(b, "norm2.shift")));
    x = diff::add(g, x, r);
  }
  x = norm_relu(g, p, "up1.norm", diff::transpose_conv2d(g, x, p.get("up1.weight"), kNoBias, up));
  x = norm_relu(g, p, "up2.norm", diff::transpose_conv2d(g, x, p.get("up2.weight"), kNoBias, up));
  x = diff::conv2d(g, x, p.get("head.weight"), p.get("head.bias"), reflect3);
  return diff::tanh(g, x);
}

std::int64_t patch_extent(std::int64_t input_extent) {
  std::int64_t e = input_extent;
  for (int stride : {2, 2, 2, 1, 1}) {
    // 4x4 kernel, zero pad 1
    if (e + 2 < 4) return 0;
    e = (e + 2 - 4) / stride + 1;
  }
  return e;
}

std::int64_t min_discriminator_extent() {
  std::int64_t e = 1;
  while (patch_extent(e) < 1) ++e;
  return e;
}

Tensor<float> discriminator_forward(Graph<float>& g, const DiscriminatorParams& params, const Tensor<float>& image) {
  const auto& opt = params.options();
  const Shape& s = image.shape();
  if (s.rank() != 4 || s[1] != opt.in_channels) {
    throw std::invalid_argument("discriminator expects [N," + std::to_string(opt.in_channels) + ",H,W] input, got " +
                                s.str());
  }
  if (patch_extent(s[2]) < 1 || patch_extent(s[3]) < 1) {
    throw std::invalid_argument("discriminator input " + s.str() + " is smaller than one patch; need extents >= " +
                                std::to_string(min_discriminator_extent()));
  }
  const auto& p = params.parameters();
  const Conv2dOptions s2{.stride = 2, .pad = 1};
  const Conv2dOptions s1{.stride = 1, .pad = 1};
  const double slope = opt.leaky_slope;
  auto norm_leaky = [&](const std::string& prefix, const Tensor<float>& x) {
    return diff::leaky_relu(g, diff::instance_norm(g, x, p.get(prefix + ".scale"), p.get(prefix + ".shift")), slope);
  };

  auto x = diff::leaky_relu(g, diff::conv2d(g, image, p.get("layer1.weight"), p.get("layer1.bias"), s2), slope);
  x = norm_leaky("layer2.norm", diff::conv2d(g, x, p.get("layer2.weight"), kNoBias, s2));
  x = norm_leaky("layer3.norm", diff::conv2d(g, x, p.get("layer3.weight"), kNoBias, s2));
  x = norm_leaky("layer4.norm", diff::conv2d(g, x, p.get("layer4.weight"), kNoBias, s1));
  return diff::conv2d(g, x, p.get("head.weight"), p.get("head.bias"), s1);
}

}  // namespace tirvis::nets
