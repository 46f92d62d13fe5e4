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

#include "tirvis/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "tirvis/ops.hpp"

namespace tirvis::losses {

bool LossReport::finite() const {
  return std::isfinite(gen_adv_G) && std::isfinite(gen_adv_F) && std::isfinite(disc_Y) && std::isfinite(disc_X) &&
         std::isfinite(cyc) && std::isfinite(total_generator);
}

template <class T>
Tensor<T> gen_adv_loss(Graph<T>& g, const Tensor<T>& d_on_fake) {
  return diff::mean(g, diff::square(g, diff::add_scalar(g, d_on_fake, T(-1))));
}

template <class T>
Tensor<T> disc_adv_loss(Graph<T>& g, const Tensor<T>& d_on_fake, const Tensor<T>& d_on_real) {
  auto fake_term = diff::mean(g, diff::square(g, d_on_fake));
  auto real_term = diff::mean(g, diff::square(g, diff::add_scalar(g, d_on_real, T(-1))));
  return diff::add(g, fake_term, real_term);
}

template <class T>
Tensor<T> cycle_loss(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& x_rec, const Tensor<T>& y,
                     const Tensor<T>& y_rec) {
  if (!(x.shape() == x_rec.shape()) || !(y.shape() == y_rec.shape())) {
    throw std::invalid_argument("cycle_loss: reconstruction shapes " + x_rec.shape().str() + ", " +
                                y_rec.shape().str() + " do not match inputs " + x.shape().str() + ", " +
                                y.shape().str());
  }
  auto forward_cycle = diff::mean(g, diff::abs(g, diff::sub(g, x_rec, x)));
  auto backward_cycle = diff::mean(g, diff::abs(g, diff::sub(g, y_rec, y)));
  return diff::add(g, forward_cycle, backward_cycle);
}

template <class T>
Tensor<T> generator_objective(Graph<T>& g, const Tensor<T>& gen_adv_G, const Tensor<T>& gen_adv_F,
                              const Tensor<T>& cyc, double lambda) {
  if (lambda < 0) throw std::invalid_argument("cycle weight lambda must be >= 0");
  return diff::add(g, diff::add(g, gen_adv_G, gen_adv_F), diff::scale(g, cyc, static_cast<T>(lambda)));
}

double total_objective(const LossReport& c, double lambda) {
  if (lambda < 0) throw std::invalid_argument("cycle weight lambda must be >= 0");
  return c.gen_adv_G + c.gen_adv_F + lambda * c.cyc;
}

#define TIRVIS_INSTANTIATE_LOSSES(T)                                                                              \
  template Tensor<T> gen_adv_loss(Graph<T>&, const Tensor<T>&);                                                   \
  template Tensor<T> disc_adv_loss(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> cycle_loss(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&); \
  template Tensor<T> generator_objective(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, double);
TIRVIS_INSTANTIATE_LOSSES(float)
TIRVIS_INSTANTIATE_LOSSES(double)

}  // namespace tirvis::losses
