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

#ifndef TIRVIS_GRAPH_HPP
#define TIRVIS_GRAPH_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tirvis/tensor.hpp"

namespace tirvis::diff {

/// Ordered tape of executed operations.
///
/// Operators append a backward closure when their output requires a gradient.
/// Since an operation can only consume tensors that already exist, append
/// order is a topological order, and backward() replays the tape once in
/// reverse. The closures own references to their inputs and outputs, so a
/// graph keeps its activations alive until it is cleared.
template <class T>
class Graph {
 public:
  using BackwardFn = std::function<void()>;

  void record(const char* op_name, BackwardFn fn) { ops_.push_back({op_name, std::move(fn)}); }

  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  const char* op_name(std::size_t i) const { return ops_.at(i).name; }
  void clear() { ops_.clear(); }

  /// Seeds d(loss)/d(loss) = 1 and runs every recorded closure in reverse.
  /// Gradients accumulate into existing buffers; the tape is consumed.
  void backward(Tensor<T>& loss) {
    if (loss.numel() != 1) {
      throw std::invalid_argument("backward() needs a scalar loss, got shape " + loss.shape().str());
    }
    if (!loss.requires_grad()) {
      throw std::invalid_argument("backward() on a loss that does not depend on any parameter");
    }
    loss.grad()[0] += T(1);
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) it->fn();
    ops_.clear();
  }

 private:
  struct Record {
    const char* name;
    BackwardFn fn;
  };
  std::vector<Record> ops_;
};

}  // namespace tirvis::diff

#endif  // TIRVIS_GRAPH_HPP
