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

#include "tirvis/trainer.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "tirvis/image.hpp"
#include "tirvis/metrics.hpp"
#include "tirvis/ops.hpp"

namespace tirvis::train {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double d = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(d)) {
    throw std::invalid_argument("config key '" + key + "': '" + value + "' is not a finite number");
  }
  return d;
}

template <class I>
I parse_int(const std::string& key, const std::string& value) {
  I out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config key '" + key + "': '" + value + "' is not a valid integer");
  }
  return out;
}

std::string format_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

// Field table shared by set/to_text/overrides.
template <class Config, class Fn>
void for_each_field(Config& c, Fn&& fn) {
  fn("lambda", c.lambda);
  fn("learning_rate", c.learning_rate);
  fn("beta1", c.beta1);
  fn("beta2", c.beta2);
  fn("epsilon", c.epsilon);
  fn("batch_size", c.batch_size);
  fn("epochs", c.epochs);
  fn("seed", c.seed);
  fn("buffer_capacity", c.buffer_capacity);
  fn("image_size", c.image_size);
  fn("resize_height", c.resize_height);
  fn("resize_width", c.resize_width);
  fn("residual_blocks", c.residual_blocks);
  fn("generator_channels", c.generator_channels);
  fn("discriminator_channels", c.discriminator_channels);
}

template <class V>
std::string to_string_value(const V& v) {
  if constexpr (std::is_floating_point_v<V>) {
    return format_double(v);
  } else {
    return std::to_string(v);
  }
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid config: " + what); };
  if (!(lambda >= 0)) fail("lambda must be >= 0");
  if (!(learning_rate > 0)) fail("learning_rate must be > 0");
  if (!(beta1 >= 0 && beta1 < 1)) fail("beta1 must be in [0, 1)");
  if (!(beta2 >= 0 && beta2 < 1)) fail("beta2 must be in [0, 1)");
  if (!(epsilon > 0)) fail("epsilon must be > 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (epochs < 0) fail("epochs must be >= 0");
  if (buffer_capacity < 0) fail("buffer_capacity must be >= 0");
  if (image_size < 8 || image_size % 4 != 0) fail("image_size must be a multiple of 4 and at least 8");
  if (resize_height < 0 || resize_width < 0) fail("resize extents must be >= 0 (0 disables resizing)");
  if ((resize_height == 0) != (resize_width == 0)) fail("resize_height and resize_width must both be 0 or both > 0");
  if (resize_height > 0 && (resize_height < image_size || resize_width < image_size)) {
    fail("resize extents must be at least image_size");
  }
  if (residual_blocks < 0) fail("residual_blocks must be >= 0");
  if (generator_channels < 1 || discriminator_channels < 1) fail("channel widths must be >= 1");
}

void TrainConfig::set(const std::string& key, const std::string& value) {
  bool found = false;
  for_each_field(*this, [&](const char* name, auto& field) {
    if (key != name) return;
    found = true;
    using V = std::remove_reference_t<decltype(field)>;
    if constexpr (std::is_floating_point_v<V>) {
      field = parse_double(key, value);
    } else {
      field = parse_int<V>(key, value);
    }
  });
  if (!found) throw std::invalid_argument("unknown config key '" + key + "'");
}

std::string TrainConfig::to_text() const {
  std::string out;
  for_each_field(*this, [&](const char* name, const auto& field) {
    out += name;
    out += " = ";
    out += to_string_value(field);
    out += '\n';
  });
  return out;
}

TrainConfig TrainConfig::from_text(const std::string& text) {
  TrainConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> TrainConfig::overrides() const {
  const TrainConfig defaults;
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> mine, theirs;
  for_each_field(*this, [&](const char*, const auto& f) { mine.push_back(to_string_value(f)); });
  for_each_field(defaults, [&](const char*, const auto& f) { theirs.push_back(to_string_value(f)); });
  std::size_t i = 0;
  for_each_field(*this, [&](const char* name, const auto&) {
    if (mine[i] != theirs[i]) out.emplace_back(name, mine[i]);
    ++i;
  });
  return out;
}

AdamState AdamState::for_parameters(std::span<const Tensor<float>> params) {
  AdamState s;
  for (const auto& p : params) {
    s.m.emplace_back(static_cast<std::size_t>(p.numel()), 0.0f);
    s.v.emplace_back(static_cast<std::size_t>(p.numel()), 0.0f);
  }
  return s;
}

bool adam_step(std::span<Tensor<float>> params, AdamState& state, const TrainConfig& c) {
  if (params.size() != state.m.size() || params.size() != state.v.size()) {
    throw std::invalid_argument("adam_step: state tracks " + std::to_string(state.m.size()) + " tensors, got " +
                                std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (static_cast<std::size_t>(params[i].numel()) != state.m[i].size()) {
      throw std::invalid_argument("adam_step: moment size mismatch for tensor " + std::to_string(i));
    }
    if (!params[i].has_grad()) continue;
    for (float g : params[i].grad()) {
      if (!std::isfinite(g)) return false;
    }
  }
  const std::uint64_t t = state.t + 1;
  const float b1 = static_cast<float>(c.beta1), b2 = static_cast<float>(c.beta2);
  const float one_minus_b1 = static_cast<float>(1.0 - c.beta1);
  const float one_minus_b2 = static_cast<float>(1.0 - c.beta2);
  // Bias corrections folded into the step size and the denominator.
  const double correction1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));
  const float step_size = static_cast<float>(c.learning_rate / correction1);
  const float inv_sqrt_c2 = static_cast<float>(1.0 / std::sqrt(correction2));
  const float eps = static_cast<float>(c.epsilon);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    if (!p.has_grad()) continue;  // treated as a zero gradient
    float* __restrict values = p.data().data();
    const float* __restrict grad = std::as_const(p).grad().data();
    float* __restrict m = state.m[i].data();
    float* __restrict v = state.v[i].data();
    const std::size_t n = state.m[i].size();
    for (std::size_t k = 0; k < n; ++k) {
      const float g = grad[k];
      m[k] = b1 * m[k] + one_minus_b1 * g;
      v[k] = b2 * v[k] + one_minus_b2 * g * g;
      values[k] -= step_size * m[k] / (std::sqrt(v[k]) * inv_sqrt_c2 + eps);
    }
  }
  state.t = t;
  return true;
}

FakeBuffer::FakeBuffer(int capacity, CounterRng rng) : capacity_(capacity), rng_(rng) {
  if (capacity < 0) throw std::invalid_argument("fake buffer capacity must be >= 0");
}

void FakeBuffer::restore(std::vector<Tensor<float>> images, CounterRng rng) {
  if (images.size() > static_cast<std::size_t>(capacity_)) {
    throw std::invalid_argument("fake buffer restore exceeds capacity");
  }
  images_ = std::move(images);
  rng_ = rng;
}

Tensor<float> FakeBuffer::query(const Tensor<float>& batch) {
  const auto& s = batch.shape();
  if (s.rank() != 4) throw std::invalid_argument("fake buffer expects [N,C,H,W], got " + s.str());
  if (capacity_ == 0) return batch.detach();
  const diff::Shape one{1, s[1], s[2], s[3]};
  const std::size_t per = static_cast<std::size_t>(one.numel());
  Tensor<float> out(s);
  auto dst = out.data();
  const auto src = batch.data();
  for (std::int64_t n = 0; n < s[0]; ++n) {
    std::vector<float> fresh(src.begin() + n * per, src.begin() + (n + 1) * per);
    const float* chosen = fresh.data();
    Tensor<float> stored_copy;
    if (images_.size() < static_cast<std::size_t>(capacity_)) {
      images_.emplace_back(one, fresh);
    } else if (rng_.uniform() >= 0.5) {
      const auto slot = rng_.uniform_index(images_.size());
      stored_copy = images_[slot];
      images_[slot] = Tensor<float>(one, fresh);
      chosen = stored_copy.data().data();
    }
    std::copy(chosen, chosen + per, dst.begin() + n * per);
  }
  return out;
}

namespace {

nets::GeneratorOptions generator_options(const TrainConfig& c) {
  return {.residual_blocks = c.residual_blocks, .base_channels = c.generator_channels};
}
nets::DiscriminatorOptions discriminator_options(const TrainConfig& c) {
  return {.base_channels = c.discriminator_channels};
}

void append(std::vector<Tensor<float>>& out, ParameterSet& set) {
  for (auto& [name, t] : set) out.push_back(t);
}

}  // namespace

Models Models::initialize(const TrainConfig& c) {
  return {nets::init_generator(derive_key(c.seed, "G"), generator_options(c)),
          nets::init_generator(derive_key(c.seed, "F"), generator_options(c)),
          nets::init_discriminator(derive_key(c.seed, "D_X"), discriminator_options(c)),
          nets::init_discriminator(derive_key(c.seed, "D_Y"), discriminator_options(c))};
}

Models Models::zeros(const TrainConfig& c) {
  return {GeneratorParams(generator_options(c)), GeneratorParams(generator_options(c)),
          DiscriminatorParams(discriminator_options(c)), DiscriminatorParams(discriminator_options(c))};
}

std::vector<Tensor<float>> Models::generator_tensors() {
  std::vector<Tensor<float>> out;
  append(out, G.parameters());
  append(out, F.parameters());
  return out;
}

std::vector<Tensor<float>> Models::discriminator_tensors() {
  std::vector<Tensor<float>> out;
  append(out, D_X.parameters());
  append(out, D_Y.parameters());
  return out;
}

TrainState TrainState::initialize(const TrainConfig& config) {
  config.validate();
  Models models = Models::initialize(config);
  auto adam_g = AdamState::for_parameters(models.generator_tensors());
  auto adam_d = AdamState::for_parameters(models.discriminator_tensors());
  return TrainState{config,
                    std::move(models),
                    std::move(adam_g),
                    std::move(adam_d),
                    FakeBuffer(config.buffer_capacity, CounterRng(derive_key(config.seed, "buffer-x"))),
                    FakeBuffer(config.buffer_capacity, CounterRng(derive_key(config.seed, "buffer-y"))),
                    0,
                    0};
}

StepResult train_step(TrainState& state, const Tensor<float>& x, const Tensor<float>& y) {
  using diff::Graph;
  auto& m = state.models;
  const auto& cfg = state.config;
  StepResult result;
  result.losses.lambda = cfg.lambda;

  // Generators: D frozen so its parameters receive no gradient.
  m.D_X.parameters().set_requires_grad(false);
  m.D_Y.parameters().set_requires_grad(false);
  m.G.parameters().set_requires_grad(true);
  m.F.parameters().set_requires_grad(true);
  m.G.parameters().zero_grad();
  m.F.parameters().zero_grad();

  Tensor<float> fake_x_detached;
  {
    Graph<float> g;
    auto fake_y = nets::generator_forward(g, m.G, x);
    auto rec_x = nets::generator_forward(g, m.F, fake_y);
    auto fake_x = nets::generator_forward(g, m.F, y);
    auto rec_y = nets::generator_forward(g, m.G, fake_x);
    auto adv_G = losses::gen_adv_loss(g, nets::discriminator_forward(g, m.D_Y, fake_y));
    auto adv_F = losses::gen_adv_loss(g, nets::discriminator_forward(g, m.D_X, fake_x));
    auto cyc = losses::cycle_loss(g, x, rec_x, y, rec_y);
    auto total = losses::generator_objective(g, adv_G, adv_F, cyc, cfg.lambda);
    result.losses.gen_adv_G = adv_G.item();
    result.losses.gen_adv_F = adv_F.item();
    result.losses.cyc = cyc.item();
    result.losses.total_generator = total.item();
    result.fake_y = fake_y.detach();
    fake_x_detached = fake_x.detach();
    const bool finite = std::isfinite(result.losses.gen_adv_G) && std::isfinite(result.losses.gen_adv_F) &&
                        std::isfinite(result.losses.cyc) && std::isfinite(result.losses.total_generator);
    if (finite) {
      g.backward(total);
      auto params = m.generator_tensors();
      result.generator_skipped = !adam_step(params, state.adam_generators, cfg);
    } else {
      result.generator_skipped = true;
    }
  }

  // Discriminators on detached, buffered fakes.
  m.G.parameters().set_requires_grad(false);
  m.F.parameters().set_requires_grad(false);
  m.D_X.parameters().set_requires_grad(true);
  m.D_Y.parameters().set_requires_grad(true);
  m.D_X.parameters().zero_grad();
  m.D_Y.parameters().zero_grad();

  const auto pool_y = state.buffer_y.query(result.fake_y);
  const auto pool_x = state.buffer_x.query(fake_x_detached);
  bool disc_finite = true;
  {
    Graph<float> g;
    auto loss = losses::disc_adv_loss(g, nets::discriminator_forward(g, m.D_Y, pool_y),
                                      nets::discriminator_forward(g, m.D_Y, y));
    result.losses.disc_Y = loss.item();
    auto half = diff::scale(g, loss, 0.5f);
    if (std::isfinite(result.losses.disc_Y)) {
      g.backward(half);
    } else {
      disc_finite = false;
    }
  }
  {
    Graph<float> g;
    auto loss = losses::disc_adv_loss(g, nets::discriminator_forward(g, m.D_X, pool_x),
                                      nets::discriminator_forward(g, m.D_X, x));
    result.losses.disc_X = loss.item();
    auto half = diff::scale(g, loss, 0.5f);
    if (std::isfinite(result.losses.disc_X)) {
      g.backward(half);
    } else {
      disc_finite = false;
    }
  }
  if (disc_finite) {
    auto params = m.discriminator_tensors();
    result.discriminator_skipped = !adam_step(params, state.adam_discriminators, cfg);
  } else {
    result.discriminator_skipped = true;
  }

  m.G.parameters().set_requires_grad(true);
  m.F.parameters().set_requires_grad(true);
  return result;
}

std::uint64_t steps_per_epoch(std::size_t x_count, int batch_size) {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  return (x_count + static_cast<std::size_t>(batch_size) - 1) / static_cast<std::size_t>(batch_size);
}

namespace {

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string step_log_header() { return "step,epoch,gen_adv_G,gen_adv_F,disc_X,disc_Y,cyc,total_generator,flagged\n"; }

std::string step_log_row(const StepRecord& r) {
  const auto& l = r.losses;
  return std::to_string(r.step) + "," + std::to_string(r.epoch + 1) + "," + g9(l.gen_adv_G) + "," +
         g9(l.gen_adv_F) + "," + g9(l.disc_X) + "," + g9(l.disc_Y) + "," + g9(l.cyc) + "," +
         g9(l.total_generator) + "," + (r.skipped ? "1" : "0") + "\n";
}

std::string epoch_log_header() {
  return "epoch,steps,skipped,gen_adv_G,gen_adv_F,disc_X,disc_Y,cyc,total_generator,truth_l1\n";
}

std::string epoch_log_row(const EpochSummary& s) {
  const auto& l = s.mean;
  return std::to_string(s.epoch) + "," + std::to_string(s.steps) + "," + std::to_string(s.skipped) + "," +
         g9(l.gen_adv_G) + "," + g9(l.gen_adv_F) + "," + g9(l.disc_X) + "," + g9(l.disc_Y) + "," + g9(l.cyc) +
         "," + g9(l.total_generator) + "," + (s.truth_l1 ? g9(*s.truth_l1) : std::string()) + "\n";
}

Tensor<float> load_batch(const data::ImageSource& source, std::span<const std::size_t> indices) {
  std::vector<data::Image> images;
  images.reserve(indices.size());
  for (auto i : indices) images.push_back(source.get(i));
  return data::stack_to_network(images);
}

double generator_truth_l1(const GeneratorParams& G, const data::ImageSource& x, const data::ImageSource& truth) {
  if (x.size() != truth.size() || x.size() == 0) throw std::invalid_argument("truth source must match the X source");
  double total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff::Graph<float> g;
    const std::size_t idx[] = {i};
    auto out = nets::generator_forward(g, G, load_batch(x, idx));
    total += metrics::l1(data::from_network(out), truth.get(i));
  }
  return total / static_cast<double>(x.size());
}

namespace {

struct EpochAccumulator {
  LossReport sum;
  std::size_t finite = 0;
  std::size_t steps = 0;
  std::size_t skipped = 0;
  double truth_sum = 0;
  std::size_t truth_count = 0;

  void add(const StepRecord& r) {
    ++steps;
    if (r.skipped) ++skipped;
    if (r.losses.finite()) {
      sum.gen_adv_G += r.losses.gen_adv_G;
      sum.gen_adv_F += r.losses.gen_adv_F;
      sum.disc_X += r.losses.disc_X;
      sum.disc_Y += r.losses.disc_Y;
      sum.cyc += r.losses.cyc;
      sum.total_generator += r.losses.total_generator;
      ++finite;
    }
    if (r.truth_l1) {
      truth_sum += *r.truth_l1;
      ++truth_count;
    }
  }

  EpochSummary summary(std::uint64_t epoch, double lambda) const {
    EpochSummary s;
    s.epoch = epoch;
    s.steps = steps;
    s.skipped = skipped;
    s.mean.lambda = lambda;
    if (finite > 0) {
      const double n = static_cast<double>(finite);
      s.mean.gen_adv_G = sum.gen_adv_G / n;
      s.mean.gen_adv_F = sum.gen_adv_F / n;
      s.mean.disc_X = sum.disc_X / n;
      s.mean.disc_Y = sum.disc_Y / n;
      s.mean.cyc = sum.cyc / n;
      s.mean.total_generator = sum.total_generator / n;
    }
    if (truth_count > 0) s.truth_l1 = truth_sum / static_cast<double>(truth_count);
    return s;
  }
};

}  // namespace

std::vector<EpochSummary> train(TrainState& state, const TrainData& d, const TrainHooks& hooks) {
  if (!d.x || !d.y) throw std::invalid_argument("train needs both domain sources");
  if (d.x->size() < 1 || d.y->size() < 1) throw std::invalid_argument("both domain datasets need at least one image");
  if (d.x_truth && d.x_truth->size() != d.x->size()) {
    throw std::invalid_argument("truth source must be index-aligned with the X source");
  }
  const auto& cfg = state.config;
  cfg.validate();
  const std::size_t nx = d.x->size();
  const std::uint64_t spe = steps_per_epoch(nx, cfg.batch_size);
  const std::uint64_t total_steps = spe * static_cast<std::uint64_t>(cfg.epochs);
  const data::UnpairedSampler sampler(nx, d.y->size(), cfg.seed);

  std::vector<EpochSummary> summaries;
  EpochAccumulator acc;
  while (state.step < total_steps) {
    const std::uint64_t epoch = state.step / spe;
    const std::uint64_t k = state.step % spe;
    const std::size_t first = static_cast<std::size_t>(k) * cfg.batch_size;
    const std::size_t last = std::min(nx, first + static_cast<std::size_t>(cfg.batch_size));
    std::vector<std::size_t> xi, yi;
    for (std::size_t j = first; j < last; ++j) {
      const auto draw = sampler.draw(epoch * nx + j);
      xi.push_back(draw.x);
      yi.push_back(draw.y);
    }
    const auto x = load_batch(*d.x, xi);
    const auto y = load_batch(*d.y, yi);
    const auto result = train_step(state, x, y);

    StepRecord record;
    record.step = state.step;
    record.epoch = epoch;
    record.losses = result.losses;
    record.skipped = result.generator_skipped || result.discriminator_skipped;
    if (d.x_truth) {
      double l1 = 0;
      for (std::size_t b = 0; b < xi.size(); ++b) {
        l1 += metrics::l1(data::from_network(result.fake_y, static_cast<int>(b)), d.x_truth->get(xi[b]));
      }
      record.truth_l1 = l1 / static_cast<double>(xi.size());
    }
    ++state.step;
    acc.add(record);

    const bool epoch_done = state.step % spe == 0;
    if (epoch_done) {
      state.epoch = epoch + 1;
    }
    const bool keep_going = !hooks.on_step || hooks.on_step(record);
    if (epoch_done) {
      summaries.push_back(acc.summary(epoch + 1, cfg.lambda));
      if (hooks.on_epoch) hooks.on_epoch(summaries.back(), state);
      acc = {};
    }
    if (!keep_going) break;
  }
  return summaries;
}

}  // namespace tirvis::train
