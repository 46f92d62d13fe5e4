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

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "tirvis/checkpoint.hpp"
#include "tirvis/synthetic.hpp"
#include "tirvis/trainer.hpp"

namespace {

using namespace tirvis::train;
using tirvis::CounterRng;
using tirvis::diff::Shape;

TrainConfig tiny_config(std::uint64_t seed = 1) {
  TrainConfig c;
  c.seed = seed;
  c.image_size = 32;
  c.resize_height = 0;
  c.resize_width = 0;
  c.residual_blocks = 1;
  c.generator_channels = 4;
  c.discriminator_channels = 4;
  c.buffer_capacity = 3;
  c.epochs = 2;
  return c;
}

Tensor<float> random_batch(std::uint64_t seed, Shape s = {1, 3, 32, 32}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  Tensor<float> t(s);
  for (auto& v : t.data()) v = u(rng);
  return t;
}

bool same_values(const ParameterSet& a, const ParameterSet& b) {
  for (const auto& [name, t] : a) {
    const auto& o = b.get(name);
    if (!std::equal(t.data().begin(), t.data().end(), o.data().begin())) return false;
  }
  return true;
}

bool same_losses(const LossReport& a, const LossReport& b) {
  return a.gen_adv_G == b.gen_adv_G && a.gen_adv_F == b.gen_adv_F && a.disc_X == b.disc_X &&
         a.disc_Y == b.disc_Y && a.cyc == b.cyc && a.total_generator == b.total_generator;
}

struct Domains {
  tirvis::data::InMemorySource x, y, truth;
};

Domains tiny_domains(int n, std::uint64_t seed) {
  auto d = tirvis::data::gen_synthetic_domains(n, 32, 32, seed);
  std::vector<tirvis::data::Image> xs;
  for (const auto& img : d.x) xs.push_back(tirvis::data::replicate_to_rgb(img));
  return {tirvis::data::InMemorySource(xs), tirvis::data::InMemorySource(d.y),
          tirvis::data::InMemorySource(d.x_truth)};
}

}  // namespace

TEST_CASE("config defaults match the training recipe") {
  const TrainConfig c;
  CHECK(c.lambda == 10.0);
  CHECK(c.learning_rate == 2e-4);
  CHECK(c.beta1 == 0.5);
  CHECK(c.beta2 == 0.999);
  CHECK(c.epsilon == 1e-8);
  CHECK(c.batch_size == 1);
  CHECK(c.buffer_capacity == 50);
  CHECK(c.overrides().empty());
}

TEST_CASE("config text round trip and overrides") {
  TrainConfig c;
  c.lambda = 0.1 + 0.2;  // not exactly representable in short decimal form
  c.seed = 18446744073709551615ULL;
  c.epochs = 20;
  const auto back = TrainConfig::from_text(c.to_text());
  CHECK(back == c);
  const auto o = c.overrides();
  REQUIRE(o.size() == 3);
  CHECK(o[0].first == "lambda");
  CHECK(TrainConfig::from_text("# comment\n  epochs = 3  # trailing\n\n").epochs == 3);
  CHECK_THROWS_AS(TrainConfig::from_text("unknown = 1"), std::invalid_argument);
  CHECK_THROWS_AS(TrainConfig::from_text("epochs = three"), std::invalid_argument);
  CHECK_THROWS_AS(TrainConfig::from_text("epochs"), std::invalid_argument);
  CHECK_THROWS_AS(TrainConfig::from_text("lambda = nan"), std::invalid_argument);
}

TEST_CASE("config validation") {
  TrainConfig c;
  c.validate();
  c.lambda = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.image_size = 30;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.resize_width = 100;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("adam first step moves by the learning rate against the gradient") {
  Tensor<float> p(Shape{1}, {0.0f}, true);
  p.grad()[0] = 1.0f;
  std::vector<Tensor<float>> params{p};
  auto state = AdamState::for_parameters(params);
  REQUIRE(adam_step(params, state, TrainConfig{}));
  CHECK(p.data()[0] == doctest::Approx(-2e-4).epsilon(1e-6));
  CHECK(state.t == 1);
}

TEST_CASE("adam leaves a parameter with zero gradient unchanged") {
  Tensor<float> p(Shape{3}, {0.5f, -1.0f, 2.0f}, true);
  p.grad();
  std::vector<Tensor<float>> params{p};
  auto state = AdamState::for_parameters(params);
  REQUIRE(adam_step(params, state, TrainConfig{}));
  CHECK(p.data()[0] == 0.5f);
  CHECK(p.data()[1] == -1.0f);
  CHECK(p.data()[2] == 2.0f);
}

TEST_CASE("adam updates are elementwise independent") {
  Tensor<float> a(Shape{2}, {0.3f, 0.3f}, true), b(Shape{1}, {0.3f}, true);
  a.grad()[0] = a.grad()[1] = b.grad()[0] = 0.7f;
  std::vector<Tensor<float>> params{a, b};
  auto state = AdamState::for_parameters(params);
  for (int i = 0; i < 5; ++i) REQUIRE(adam_step(params, state, TrainConfig{}));
  CHECK(a.data()[0] == a.data()[1]);
  CHECK(a.data()[0] == b.data()[0]);
}

TEST_CASE("adam first-step size is bounded by the learning rate") {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> n(0.0f, 5.0f);
  Tensor<float> p(Shape{1000}, true);
  for (auto& g : p.grad()) g = n(rng);
  std::vector<Tensor<float>> params{p};
  auto state = AdamState::for_parameters(params);
  REQUIRE(adam_step(params, state, TrainConfig{}));
  for (float v : p.data()) CHECK(std::abs(v) <= 2e-4f * (1.0f + 1e-6f));
}

TEST_CASE("adam aborts on a non-finite gradient") {
  Tensor<float> p(Shape{2}, {1.0f, 2.0f}, true);
  p.grad()[0] = 1.0f;
  p.grad()[1] = std::numeric_limits<float>::infinity();
  std::vector<Tensor<float>> params{p};
  auto state = AdamState::for_parameters(params);
  CHECK_FALSE(adam_step(params, state, TrainConfig{}));
  CHECK(p.data()[0] == 1.0f);
  CHECK(state.t == 0);
  CHECK(state.m[0][0] == 0.0f);
}

TEST_CASE("fake buffer below capacity returns the fresh image and stores a copy") {
  FakeBuffer buffer(2, CounterRng(5));
  auto fresh = random_batch(1, {1, 3, 4, 4});
  const auto out = buffer.query(fresh);
  CHECK(std::equal(out.data().begin(), out.data().end(), fresh.data().begin()));
  fresh.data()[0] = 42.0f;
  CHECK(buffer.images()[0].data()[0] != 42.0f);
  CHECK(buffer.size() == 1);
}

TEST_CASE("fake buffer never exceeds capacity and swaps about half the time once full") {
  FakeBuffer buffer(5, CounterRng(6));
  int fresh_returned = 0;
  const int queries = 4000;
  for (int i = 0; i < queries; ++i) {
    const auto img = Tensor<float>::filled(Shape{1, 1, 2, 2}, static_cast<float>(i));
    const auto out = buffer.query(img);
    CHECK(buffer.size() <= 5);
    if (i >= 5) {
      if (out.data()[0] == static_cast<float>(i)) {
        ++fresh_returned;
      } else {
        CHECK(out.data()[0] < static_cast<float>(i));
      }
    }
  }
  const double p = static_cast<double>(fresh_returned) / (queries - 5);
  CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / (queries - 5)));
}

TEST_CASE("fake buffer with zero capacity passes through") {
  FakeBuffer buffer(0, CounterRng(7));
  const auto img = random_batch(2, {2, 3, 4, 4});
  const auto out = buffer.query(img);
  CHECK(std::equal(out.data().begin(), out.data().end(), img.data().begin()));
  CHECK(buffer.size() == 0);
}

TEST_CASE("generators get no adversarial gradient at the optimum with lambda 0") {
  auto config = tiny_config();
  config.lambda = 0;
  auto state = TrainState::initialize(config);
  for (auto* d : {&state.models.D_X, &state.models.D_Y}) {
    d->parameters().get("head.weight").data()[0] = 0.0f;
    for (auto& v : d->parameters().get("head.weight").data()) v = 0.0f;
    d->parameters().get("head.bias").data()[0] = 1.0f;
  }
  const auto G = state.models.G, F = state.models.F;
  const auto r = train_step(state, random_batch(1), random_batch(2));
  CHECK(r.losses.gen_adv_G == 0.0);
  CHECK(r.losses.gen_adv_F == 0.0);
  CHECK(same_values(G.parameters(), state.models.G.parameters()));
  CHECK(same_values(F.parameters(), state.models.F.parameters()));
}

TEST_CASE("one step changes every network") {
  auto state = TrainState::initialize(tiny_config());
  const Models before = state.models;
  const auto r = train_step(state, random_batch(3), random_batch(4));
  CHECK(r.losses.finite());
  CHECK_FALSE(r.generator_skipped);
  CHECK_FALSE(r.discriminator_skipped);
  CHECK_FALSE(same_values(before.G.parameters(), state.models.G.parameters()));
  CHECK_FALSE(same_values(before.F.parameters(), state.models.F.parameters()));
  CHECK_FALSE(same_values(before.D_X.parameters(), state.models.D_X.parameters()));
  CHECK_FALSE(same_values(before.D_Y.parameters(), state.models.D_Y.parameters()));
  CHECK(state.adam_generators.t == 1);
  CHECK(state.adam_discriminators.t == 1);
  CHECK(r.losses.total_generator ==
        doctest::Approx(r.losses.gen_adv_G + r.losses.gen_adv_F + 10.0 * r.losses.cyc).epsilon(1e-6));
}

TEST_CASE("same seed gives identical loss reports for ten steps") {
  auto a = TrainState::initialize(tiny_config(9));
  auto b = TrainState::initialize(tiny_config(9));
  for (int i = 0; i < 10; ++i) {
    const auto x = random_batch(100 + i), y = random_batch(200 + i);
    CHECK(same_losses(train_step(a, x, y).losses, train_step(b, x, y).losses));
  }
}

TEST_CASE("a non-finite loss skips the update") {
  auto state = TrainState::initialize(tiny_config());
  const Models before = state.models;
  auto x = random_batch(5);
  x.data()[7] = std::numeric_limits<float>::quiet_NaN();
  const auto r = train_step(state, x, random_batch(6));
  CHECK(r.generator_skipped);
  CHECK(r.discriminator_skipped);
  CHECK_FALSE(r.losses.finite());
  CHECK(same_values(before.G.parameters(), state.models.G.parameters()));
  CHECK(same_values(before.D_X.parameters(), state.models.D_X.parameters()));
  CHECK(state.adam_generators.t == 0);
}

TEST_CASE("train with zero epochs returns the initial parameters") {
  auto config = tiny_config();
  config.epochs = 0;
  auto state = TrainState::initialize(config);
  const Models before = state.models;
  auto d = tiny_domains(3, 1);
  const auto history = train(state, {&d.x, &d.y});
  CHECK(history.empty());
  CHECK(same_values(before.G.parameters(), state.models.G.parameters()));
}

TEST_CASE("train emits one summary per epoch and counts steps") {
  auto config = tiny_config();
  config.epochs = 3;
  auto state = TrainState::initialize(config);
  auto d = tiny_domains(4, 2);
  int steps = 0, epochs_seen = 0;
  TrainHooks hooks;
  hooks.on_step = [&](const StepRecord& r) {
    CHECK(r.step == static_cast<std::uint64_t>(steps));
    CHECK(r.truth_l1.has_value());
    ++steps;
    return true;
  };
  hooks.on_epoch = [&](const EpochSummary& s, const TrainState& st) {
    ++epochs_seen;
    CHECK(s.epoch == st.epoch);
    CHECK(s.steps == 4);
  };
  const auto history = train(state, {&d.x, &d.y, &d.truth}, hooks);
  CHECK(history.size() == 3);
  CHECK(steps == 12);
  CHECK(epochs_seen == 3);
  CHECK(state.step == 12);
  CHECK(state.epoch == 3);
  CHECK(history[0].truth_l1.has_value());
}

TEST_CASE("train batches stack consecutive schedule positions") {
  auto config = tiny_config();
  config.epochs = 1;
  config.batch_size = 2;
  auto state = TrainState::initialize(config);
  auto d = tiny_domains(5, 3);
  const auto history = train(state, {&d.x, &d.y});
  REQUIRE(history.size() == 1);
  CHECK(history[0].steps == 3);
  CHECK(steps_per_epoch(5, 2) == 3);
}

TEST_CASE("train rejects empty datasets") {
  auto state = TrainState::initialize(tiny_config());
  tirvis::data::InMemorySource empty({});
  auto d = tiny_domains(2, 4);
  CHECK_THROWS_AS(train(state, {&empty, &d.y}), std::invalid_argument);
  CHECK_THROWS_AS(train(state, {&d.x, &empty}), std::invalid_argument);
}

TEST_CASE("checkpoint save, load, save is byte identical") {
  auto state = TrainState::initialize(tiny_config());
  auto d = tiny_domains(3, 5);
  train(state, {&d.x, &d.y});
  const auto bytes = serialize_checkpoint(state);
  const auto loaded = deserialize_checkpoint(bytes);
  CHECK(serialize_checkpoint(loaded) == bytes);
  CHECK(loaded.config == state.config);
  CHECK(loaded.step == state.step);
  CHECK(loaded.buffer_y.size() == state.buffer_y.size());
  CHECK(loaded.buffer_y.rng().counter() == state.buffer_y.rng().counter());
}

TEST_CASE("checkpoint round trip gives bit-identical inference") {
  auto state = TrainState::initialize(tiny_config());
  const auto loaded = deserialize_checkpoint(serialize_checkpoint(state));
  const auto x = random_batch(11);
  tirvis::diff::Graph<float> g;
  const auto a = tirvis::nets::generator_forward(g, state.models.G, x);
  const auto b = tirvis::nets::generator_forward(g, loaded.models.G, x);
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
}

TEST_CASE("checkpoint errors are descriptive") {
  const auto bytes = serialize_checkpoint(TrainState::initialize(tiny_config()));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH_AS(deserialize_checkpoint(bad_magic), doctest::Contains("magic"), CheckpointError);
  auto bad_version = bytes;
  bad_version[8] = 9;
  CHECK_THROWS_WITH_AS(deserialize_checkpoint(bad_version), doctest::Contains("version"), CheckpointError);
  for (std::size_t cut : {std::size_t{4}, std::size_t{13}, bytes.size() / 2, bytes.size() - 1}) {
    std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
    CHECK_THROWS_AS(deserialize_checkpoint(truncated), CheckpointError);
  }
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_WITH_AS(deserialize_checkpoint(trailing), doctest::Contains("trailing"), CheckpointError);
}

TEST_CASE("resume after step N continues the uninterrupted trajectory") {
  auto config = tiny_config(21);
  config.epochs = 2;
  auto d = tiny_domains(3, 6);

  std::vector<StepRecord> reference;
  {
    auto state = TrainState::initialize(config);
    train(state, {&d.x, &d.y}, {.on_step = [&](const StepRecord& r) {
                                 reference.push_back(r);
                                 return true;
                               }});
  }
  REQUIRE(reference.size() == 6);

  // Stop mid-epoch, persist, restore, continue.
  std::vector<std::uint8_t> saved;
  {
    auto state = TrainState::initialize(config);
    train(state, {&d.x, &d.y}, {.on_step = [&](const StepRecord& r) { return r.step < 3; }});
    REQUIRE(state.step == 4);
    saved = serialize_checkpoint(state);
  }
  auto resumed = deserialize_checkpoint(saved);
  std::vector<StepRecord> tail;
  train(resumed, {&d.x, &d.y}, {.on_step = [&](const StepRecord& r) {
                                  tail.push_back(r);
                                  return true;
                                }});
  REQUIRE(tail.size() == 2);
  for (std::size_t i = 0; i < tail.size(); ++i) {
    CHECK(tail[i].step == reference[4 + i].step);
    CHECK(same_losses(tail[i].losses, reference[4 + i].losses));
  }
}
