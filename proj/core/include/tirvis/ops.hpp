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

#ifndef TIRVIS_OPS_HPP
#define TIRVIS_OPS_HPP

#include "tirvis/graph.hpp"
#include "tirvis/tensor.hpp"

namespace tirvis::diff {

// All operators take NCHW tensors where spatial layout matters. An operator
// records itself on the graph only when one of its inputs requires a
// gradient; the output inherits requires_grad from its inputs.

enum class PadMode { kZero, kReflect };

struct Conv2dOptions {
  int stride = 1;
  int pad = 0;
  PadMode pad_mode = PadMode::kZero;
};

struct TransposeConv2dOptions {
  int stride = 1;
  int pad = 0;
  /// Extra rows/columns appended on the bottom/right of the output.
  int output_padding = 0;
};

/// Selects the product layout used by conv2d. kAuto picks per call; the
/// explicit values exist so tests can pin each path.
enum class ConvAlgo { kAuto, kIm2col, kShiftGemm };

/// Cross-correlation. input [N,C,H,W], kernel [F,C,kh,kw], bias [F] or
/// undefined. Output [N,F,H',W'] with H' = (H + 2*pad - kh) / stride + 1.
template <class T>
Tensor<T> conv2d(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                 const Conv2dOptions& opt, ConvAlgo algo = ConvAlgo::kAuto);

/// Adjoint of conv2d with zero padding. input [N,Cin,H,W], kernel
/// [Cin,Cout,kh,kw], bias [Cout] or undefined. Output spatial size
/// (H - 1) * stride - 2 * pad + kh + output_padding.
template <class T>
Tensor<T> transpose_conv2d(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                           const TransposeConv2dOptions& opt);

/// Per-(n, c) normalization to zero mean and unit population variance,
/// followed by the per-channel affine map scale * x + shift.
template <class T>
Tensor<T> instance_norm(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& scale, const Tensor<T>& shift,
                        T eps = T(1e-5));

enum class ActivationKind { kRelu, kLeakyRelu, kTanh };

struct Activation {
  ActivationKind kind = ActivationKind::kRelu;
  double alpha = 0.2;  // leaky slope
};

template <class T>
Tensor<T> activation(Graph<T>& g, const Tensor<T>& input, Activation act);

template <class T>
Tensor<T> relu(Graph<T>& g, const Tensor<T>& x) {
  return activation(g, x, {ActivationKind::kRelu, 0.0});
}
template <class T>
Tensor<T> leaky_relu(Graph<T>& g, const Tensor<T>& x, double alpha = 0.2) {
  return activation(g, x, {ActivationKind::kLeakyRelu, alpha});
}
template <class T>
Tensor<T> tanh(Graph<T>& g, const Tensor<T>& x) {
  return activation(g, x, {ActivationKind::kTanh, 0.0});
}

// Elementwise arithmetic on equal shapes.
template <class T>
Tensor<T> add(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b);
template <class T>
Tensor<T> sub(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b);
template <class T>
Tensor<T> mul(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b);
template <class T>
Tensor<T> add_scalar(Graph<T>& g, const Tensor<T>& a, T s);
template <class T>
Tensor<T> scale(Graph<T>& g, const Tensor<T>& a, T s);
template <class T>
Tensor<T> square(Graph<T>& g, const Tensor<T>& a);
/// |a|; the subgradient at 0 is taken as 0.
template <class T>
Tensor<T> abs(Graph<T>& g, const Tensor<T>& a);

// Full reductions to a [1] tensor, summed in row-major order.
template <class T>
Tensor<T> sum(Graph<T>& g, const Tensor<T>& a);
template <class T>
Tensor<T> mean(Graph<T>& g, const Tensor<T>& a);

#define TIRVIS_DECLARE_OPS(T)                                                                                    \
  extern template Tensor<T> conv2d(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,             \
                                   const Conv2dOptions&, ConvAlgo);                                             \
  extern template Tensor<T> transpose_conv2d(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,   \
                                             const TransposeConv2dOptions&);                                    \
  extern template Tensor<T> instance_norm(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T);  \
  extern template Tensor<T> activation(Graph<T>&, const Tensor<T>&, Activation);                                \
  extern template Tensor<T> add(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                                 \
  extern template Tensor<T> sub(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                                 \
  extern template Tensor<T> mul(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                                 \
  extern template Tensor<T> add_scalar(Graph<T>&, const Tensor<T>&, T);                                         \
  extern template Tensor<T> scale(Graph<T>&, const Tensor<T>&, T);                                              \
  extern template Tensor<T> square(Graph<T>&, const Tensor<T>&);                                                \
  extern template Tensor<T> abs(Graph<T>&, const Tensor<T>&);                                                   \
  extern template Tensor<T> sum(Graph<T>&, const Tensor<T>&);                                                   \
  extern template Tensor<T> mean(Graph<T>&, const Tensor<T>&);

TIRVIS_DECLARE_OPS(float)
TIRVIS_DECLARE_OPS(double)
#undef TIRVIS_DECLARE_OPS

}  // namespace tirvis::diff

#endif  // TIRVIS_OPS_HPP
