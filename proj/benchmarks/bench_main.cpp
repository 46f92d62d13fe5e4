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

#include <benchmark/benchmark.h>

#include "tirvis/metrics.hpp"
#include "tirvis/nets.hpp"
#include "tirvis/ops.hpp"
#include "tirvis/synthetic.hpp"
#include "tirvis/trainer.hpp"

namespace {

using namespace tirvis;
using diff::Graph;
using diff::Shape;
using diff::Tensor;

Tensor<float> filled(Shape s, float v, bool rg = false) { return Tensor<float>::filled(s, v, rg); }

// Args: channels, spatial extent, algorithm (0 im2col, 1 shift-GEMM).
void BM_Conv3x3Forward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0)), e = static_cast<int>(state.range(1));
  const auto algo = state.range(2) ? diff::ConvAlgo::kShiftGemm : diff::ConvAlgo::kIm2col;
  const auto x = filled({1, c, e, e}, 0.1f);
  const auto k = filled({c, c, 3, 3}, 0.01f);
  for (auto _ : state) {
    Graph<float> g;
    auto y = diff::conv2d(g, x, k, Tensor<float>(), {.stride = 1, .pad = 1}, algo);
    benchmark::DoNotOptimize(y.data().data());
  }
  state.counters["GFLOP/s"] =
      benchmark::Counter(2.0 * c * c * 9 * e * e, benchmark::Counter::kIsIterationInvariantRate,
                         benchmark::Counter::kIs1000);
}
BENCHMARK(BM_Conv3x3Forward)->Args({256, 16, 0})->Args({64, 64, 0})->Args({3, 64, 0})->Unit(benchmark::kMillisecond);

void BM_Conv3x3ForwardBackward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0)), e = static_cast<int>(state.range(1));
  const auto x = filled({1, c, e, e}, 0.1f, true);
  const auto k = filled({c, c, 3, 3}, 0.01f, true);
  for (auto _ : state) {
    Graph<float> g;
    auto loss = diff::sum(g, diff::conv2d(g, x, k, Tensor<float>(), {.stride = 1, .pad = 1}));
    g.backward(loss);
  }
  state.counters["GFLOP/s"] =
      benchmark::Counter(6.0 * c * c * 9 * e * e, benchmark::Counter::kIsIterationInvariantRate,
                         benchmark::Counter::kIs1000);
}
BENCHMARK(BM_Conv3x3ForwardBackward)->Args({256, 16})->Args({64, 64})->Unit(benchmark::kMillisecond);

// Args: image extent, residual blocks.
void BM_GeneratorForward(benchmark::State& state) {
  const int e = static_cast<int>(state.range(0));
  const auto params = nets::init_generator(1, {.residual_blocks = static_cast<int>(state.range(1))});
  const auto x = filled({1, 3, e, e}, 0.2f);
  for (auto _ : state) {
    Graph<float> g;
    auto y = nets::generator_forward(g, params, x);
    benchmark::DoNotOptimize(y.data().data());
  }
}
BENCHMARK(BM_GeneratorForward)->Args({64, 6})->Args({256, 9})->Unit(benchmark::kMillisecond);

void BM_DiscriminatorForward(benchmark::State& state) {
  const int e = static_cast<int>(state.range(0));
  const auto params = nets::init_discriminator(1);
  const auto x = filled({1, 3, e, e}, 0.2f);
  for (auto _ : state) {
    Graph<float> g;
    auto y = nets::discriminator_forward(g, params, x);
    benchmark::DoNotOptimize(y.data().data());
  }
}
BENCHMARK(BM_DiscriminatorForward)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

// One full alternating update at the desk-scale configuration.
void BM_TrainStepDeskScale(benchmark::State& state) {
  train::TrainConfig config;
  config.image_size = 64;
  config.resize_height = 0;
  config.resize_width = 0;
  config.residual_blocks = 6;
  auto ts = train::TrainState::initialize(config);
  const auto d = data::gen_synthetic_domains(1, 64, 64, 42);
  const auto x = data::to_network(data::replicate_to_rgb(d.x[0]));
  const auto y = data::to_network(d.y[0]);
  for (auto _ : state) {
    auto r = train::train_step(ts, x, y);
    benchmark::DoNotOptimize(r.losses.cyc);
  }
}
BENCHMARK(BM_TrainStepDeskScale)->Unit(benchmark::kMillisecond)->Iterations(5);

void BM_Ssim256(benchmark::State& state) {
  const auto d = data::gen_synthetic_test(2, 256, 256, 3);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::ssim(d.y[0], d.y[1]));
}
BENCHMARK(BM_Ssim256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
