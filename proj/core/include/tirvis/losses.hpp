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

#ifndef TIRVIS_LOSSES_HPP
#define TIRVIS_LOSSES_HPP

#include "tirvis/graph.hpp"
#include "tirvis/tensor.hpp"

namespace tirvis::losses {

using diff::Graph;
using diff::Tensor;

/// Loss components of one training step. The discriminator terms are
/// optimized separately from total_generator.
struct LossReport {
  double gen_adv_G = 0;  // G fooling D_Y
  double gen_adv_F = 0;  // F fooling D_X
  double disc_Y = 0;
  double disc_X = 0;
  double cyc = 0;
  double total_generator = 0;
  double lambda = 0;

  bool finite() const;
};

/// Least-squares generator term: mean over batch and patches of (d - 1)^2.
template <class T>
Tensor<T> gen_adv_loss(Graph<T>& g, const Tensor<T>& d_on_fake);

/// Least-squares discriminator term: mean(d_fake^2) + mean((d_real - 1)^2).
template <class T>
Tensor<T> disc_adv_loss(Graph<T>& g, const Tensor<T>& d_on_fake, const Tensor<T>& d_on_real);

/// mean|x_rec - x| + mean|y_rec - y|.
template <class T>
Tensor<T> cycle_loss(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& x_rec, const Tensor<T>& y,
                     const Tensor<T>& y_rec);

/// gen_adv_G + gen_adv_F + lambda * cyc as a graph node.
template <class T>
Tensor<T> generator_objective(Graph<T>& g, const Tensor<T>& gen_adv_G, const Tensor<T>& gen_adv_F,
                              const Tensor<T>& cyc, double lambda);

/// Scalar form of generator_objective over reported components. Throws for
/// negative lambda.
double total_objective(const LossReport& components, double lambda);

#define TIRVIS_DECLARE_LOSSES(T)                                                                         \
  extern template Tensor<T> gen_adv_loss(Graph<T>&, const Tensor<T>&);                                  \
  extern template Tensor<T> disc_adv_loss(Graph<T>&, const Tensor<T>&, const Tensor<T>&);               \
  extern template Tensor<T> cycle_loss(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, \
                                       const Tensor<T>&);                                               \
  extern template Tensor<T> generator_objective(Graph<T>&, const Tensor<T>&, const Tensor<T>&,          \
                                                const Tensor<T>&, double);
TIRVIS_DECLARE_LOSSES(float)
TIRVIS_DECLARE_LOSSES(double)
#undef TIRVIS_DECLARE_LOSSES

}  // namespace tirvis::losses

#endif  // TIRVIS_LOSSES_HPP
