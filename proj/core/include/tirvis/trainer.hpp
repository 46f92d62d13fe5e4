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

#ifndef TIRVIS_TRAINER_HPP
#define TIRVIS_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tirvis/dataset.hpp"
#include "tirvis/losses.hpp"
#include "tirvis/nets.hpp"
#include "tirvis/random.hpp"

namespace tirvis::train {

using diff::Tensor;
using losses::LossReport;
using nets::DiscriminatorParams;
using nets::GeneratorParams;
using nets::ParameterSet;

struct TrainConfig {
  double lambda = 10.0;
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 1;
  int epochs = 1;
  std::uint64_t seed = 0;
  int buffer_capacity = 50;
  int image_size = 256;  // crop target
  int resize_height = 256;
  int resize_width = 320;
  int residual_blocks = 9;
  int generator_channels = 64;
  int discriminator_channels = 64;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Sets one field from text. Throws on an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);

  /// Every field as "key = value" lines in declaration order. Floating-point
  /// values round-trip exactly.
  std::string to_text() const;
  /// Parses the to_text() format; '#' starts a comment. Missing keys keep
  /// their defaults.
  static TrainConfig from_text(const std::string& text);

  /// (key, value) for every field that differs from the default.
  std::vector<std::pair<std::string, std::string>> overrides() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Per-parameter moment estimates and the shared step counter.
struct AdamState {
  std::vector<std::vector<float>> m;
  std::vector<std::vector<float>> v;
  std::uint64_t t = 0;

  /// Zero moments matching each parameter's size.
  static AdamState for_parameters(std::span<const Tensor<float>> params);
};

/// One bias-corrected Adam update over every parameter. When any gradient
/// is non-finite nothing changes (not even t) and false is returned.
bool adam_step(std::span<Tensor<float>> params, AdamState& state, const TrainConfig& config);

/// History of generated images for discriminator updates.
class FakeBuffer {
 public:
  FakeBuffer(int capacity, CounterRng rng);

  /// Per sample of a [N, C, H, W] batch: below capacity the sample is stored
  /// and returned as is; once full, with probability 1/2 it is returned, and
  /// otherwise it replaces a uniformly chosen stored image, which is returned
  /// in its place.
  Tensor<float> query(const Tensor<float>& batch);

  int capacity() const { return capacity_; }
  std::size_t size() const { return images_.size(); }
  const std::vector<Tensor<float>>& images() const { return images_; }
  const CounterRng& rng() const { return rng_; }

  /// Replaces the contents; used when loading a checkpoint.
  void restore(std::vector<Tensor<float>> images, CounterRng rng);

 private:
  int capacity_;
  std::vector<Tensor<float>> images_;
  CounterRng rng_;
};

/// G maps X to Y, F maps Y to X; D_X judges domain X, D_Y domain Y.
struct Models {
  GeneratorParams G;
  GeneratorParams F;
  DiscriminatorParams D_X;
  DiscriminatorParams D_Y;

  /// Freshly initialized networks for a config; each network draws from its
  /// own stream of the config seed.
  static Models initialize(const TrainConfig& config);
  /// Zero-filled networks with the config's architecture.
  static Models zeros(const TrainConfig& config);

  std::vector<Tensor<float>> generator_tensors();
  std::vector<Tensor<float>> discriminator_tensors();
};

/// Everything that evolves during training.
struct TrainState {
  TrainConfig config;
  Models models;
  AdamState adam_generators;
  AdamState adam_discriminators;
  FakeBuffer buffer_x;  // generated X images, i.e. F(y)
  FakeBuffer buffer_y;  // generated Y images, i.e. G(x)
  std::uint64_t step = 0;
  std::uint64_t epoch = 0;

  static TrainState initialize(const TrainConfig& config);
};

struct StepResult {
  LossReport losses;
  bool generator_skipped = false;
  bool discriminator_skipped = false;
  Tensor<float> fake_y;  // G(x) before the generator update
};

/// One alternating update: both generators jointly on the adversarial plus
/// cycle objective, then D_Y and D_X on half their least-squares loss using
/// buffered fakes. A non-finite loss or gradient skips the affected update.
/// Does not advance state.step.
StepResult train_step(TrainState& state, const Tensor<float>& x, const Tensor<float>& y);

struct StepRecord {
  std::uint64_t step = 0;
  std::uint64_t epoch = 0;
  LossReport losses;
  bool skipped = false;
  std::optional<double> truth_l1;
};

struct EpochSummary {
  std::uint64_t epoch = 0;  // 1-based
  LossReport mean;          // over finite steps
  std::size_t steps = 0;
  std::size_t skipped = 0;
  std::optional<double> truth_l1;
};

struct TrainHooks {
  /// Returning false stops training after this step.
  std::function<bool(const StepRecord&)> on_step;
  std::function<void(const EpochSummary&, const TrainState&)> on_epoch;
};

/// Optional ground truth for the X side, index-aligned with the X source.
/// Each step then reports the L1 distance of G(x) from it in [0, 1] units.
struct TrainData {
  const data::ImageSource* x = nullptr;
  const data::ImageSource* y = nullptr;
  const data::ImageSource* x_truth = nullptr;
};

std::uint64_t steps_per_epoch(std::size_t x_count, int batch_size);

/// Runs from state.step until state.config.epochs are complete (or a hook
/// stops it). The schedule depends only on (seed, step), so a state restored
/// from a checkpoint continues the same trajectory. Returns one summary per
/// epoch finished in this call.
std::vector<EpochSummary> train(TrainState& state, const TrainData& data, const TrainHooks& hooks = {});

/// Per-step training log: "step,epoch,gen_adv_G,gen_adv_F,disc_X,disc_Y,cyc,
/// total_generator,flagged" with %.9g values and a 1-based epoch. Rows carry no
/// timing information, so equal trajectories give byte-equal logs.
std::string step_log_header();
std::string step_log_row(const StepRecord& record);

/// Per-epoch means plus the optional truth L1 (empty when unavailable).
std::string epoch_log_header();
std::string epoch_log_row(const EpochSummary& summary);

/// Batch of the given indices as a network tensor in [-1, 1].
Tensor<float> load_batch(const data::ImageSource& source, std::span<const std::size_t> indices);

/// Mean L1 of G(x) against the truth over a whole source, in [0, 1] units.
double generator_truth_l1(const GeneratorParams& G, const data::ImageSource& x, const data::ImageSource& truth);

}  // namespace tirvis::train

#endif  // TIRVIS_TRAINER_HPP
