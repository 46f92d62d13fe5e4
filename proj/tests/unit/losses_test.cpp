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

#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tirvis/losses.hpp"

namespace {

using namespace tirvis::losses;
using tirvis::diff::Shape;

Tensor<double> filled(Shape s, double v) { return Tensor<double>::filled(s, v); }

double gen(double v) {
  Graph<double> g;
  return gen_adv_loss(g, filled({1, 1, 6, 6}, v)).item();
}

double disc(double fake, double real) {
  Graph<double> g;
  return disc_adv_loss(g, filled({1, 1, 6, 6}, fake), filled({1, 1, 6, 6}, real)).item();
}

}  // namespace

TEST_CASE("generator adversarial loss examples") {
  CHECK(gen(1.0) == 0.0);
  CHECK(gen(0.5) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(gen(0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("discriminator adversarial loss examples") {
  CHECK(disc(0.0, 1.0) == 0.0);
  CHECK(disc(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(disc(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cycle loss examples") {
  std::mt19937_64 rng(3);
  const Shape s{1, 3, 4, 4};
  auto x = tirvis::testing::random_tensor(rng, s);
  auto y = tirvis::testing::random_tensor(rng, s);
  auto shifted = [](const Tensor<double>& t, double d) {
    auto out = t.clone();
    for (auto& v : out.data()) v += d;
    return out;
  };
  Graph<double> g;
  CHECK(cycle_loss(g, x, x, y, y).item() == 0.0);
  CHECK(cycle_loss(g, x, shifted(x, 0.1), y, y).item() == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(cycle_loss(g, x, shifted(x, 0.1), y, shifted(y, -0.2)).item() == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("cycle loss rejects mismatched shapes") {
  Graph<double> g;
  CHECK_THROWS_AS(cycle_loss(g, filled({1, 3, 4, 4}, 0), filled({1, 3, 4, 5}, 0), filled({1, 3, 4, 4}, 0),
                             filled({1, 3, 4, 4}, 0)),
                  std::invalid_argument);
}

TEST_CASE("cycle loss is symmetric in its two pairs") {
  std::mt19937_64 rng(4);
  const Shape s{1, 3, 4, 4};
  auto a = tirvis::testing::random_tensor(rng, s), b = tirvis::testing::random_tensor(rng, s);
  auto c = tirvis::testing::random_tensor(rng, s), d = tirvis::testing::random_tensor(rng, s);
  Graph<double> g;
  CHECK(cycle_loss(g, a, b, c, d).item() == doctest::Approx(cycle_loss(g, c, d, a, b).item()).epsilon(1e-14));
}

TEST_CASE("total objective examples") {
  LossReport r;
  r.gen_adv_G = 0.25;
  r.gen_adv_F = 0.25;
  r.cyc = 0.05;
  CHECK(total_objective(r, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_objective(LossReport{}, 10.0) == 0.0);
  CHECK(total_objective(r, 0.0) == 0.5);
  CHECK_THROWS_AS(total_objective(r, -1.0), std::invalid_argument);
}

TEST_CASE("total objective is monotone in lambda") {
  LossReport r;
  r.gen_adv_G = 0.3;
  r.gen_adv_F = 0.1;
  r.cyc = 0.07;
  double prev = total_objective(r, 0.0);
  for (double lambda = 0.5; lambda <= 20.0; lambda += 0.5) {
    const double t = total_objective(r, lambda);
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("graph objective equals the scalar objective") {
  Graph<double> g;
  auto t = generator_objective(g, Tensor<double>::scalar(0.25), Tensor<double>::scalar(0.5),
                               Tensor<double>::scalar(0.05), 10.0);
  CHECK(t.item() == doctest::Approx(1.25).epsilon(1e-14));
  CHECK_THROWS_AS(generator_objective(g, Tensor<double>::scalar(0), Tensor<double>::scalar(0),
                                      Tensor<double>::scalar(0), -0.5),
                  std::invalid_argument);
}

TEST_CASE("loss components are non-negative on random inputs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Graph<double> g;
    const Shape s{1, 1, 3, 3};
    auto a = tirvis::testing::random_tensor(rng, s, -3, 3), b = tirvis::testing::random_tensor(rng, s, -3, 3);
    CHECK(gen_adv_loss(g, a).item() >= 0.0);
    CHECK(disc_adv_loss(g, a, b).item() >= 0.0);
    CHECK(cycle_loss(g, a, b, b, a).item() >= 0.0);
  }
}

TEST_CASE("loss gradients match central differences") {
  std::mt19937_64 rng(6);
  const Shape s{1, 1, 3, 3};
  auto a = tirvis::testing::random_tensor(rng, s), b = tirvis::testing::random_tensor(rng, s);
  auto c = tirvis::testing::random_tensor(rng, s), d = tirvis::testing::random_tensor(rng, s);
  using tirvis::testing::grad_check;
  CHECK(grad_check([&](Graph<double>& g) { return gen_adv_loss(g, a); }, {a}).worst_relative_error < 1e-6);
  CHECK(grad_check([&](Graph<double>& g) { return disc_adv_loss(g, a, b); }, {a, b}).worst_relative_error < 1e-6);
  CHECK(grad_check([&](Graph<double>& g) { return cycle_loss(g, a, b, c, d); }, {a, b, c, d})
            .worst_relative_error < 1e-6);
}
