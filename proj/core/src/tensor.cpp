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

#include "tirvis/tensor.hpp"

#include <sstream>

namespace tirvis::diff {

Shape::Shape(std::initializer_list<std::int64_t> extents)
    : Shape(std::span<const std::int64_t>(extents.begin(), extents.size())) {}

Shape::Shape(std::span<const std::int64_t> extents) {
  if (extents.empty() || extents.size() > static_cast<std::size_t>(kMaxRank)) {
    throw std::invalid_argument("tensor rank must be in [1, 4], got " + std::to_string(extents.size()));
  }
  for (auto e : extents) {
    if (e < 1) throw std::invalid_argument("tensor extents must be positive");
  }
  std::copy(extents.begin(), extents.end(), dims_.begin());
  rank_ = static_cast<int>(extents.size());
}

std::int64_t Shape::numel() const {
  if (rank_ == 0) return 0;
  std::int64_t n = 1;
  for (int i = 0; i < rank_; ++i) n *= dims_[i];
  return n;
}

std::string Shape::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < rank_; ++i) {
    if (i) os << 'x';
    os << dims_[i];
  }
  os << ']';
  return os.str();
}

template <class T>
Tensor<T>::Tensor(Shape shape, bool requires_grad) : impl_(std::make_shared<Impl>()) {
  impl_->data.assign(static_cast<std::size_t>(shape.numel()), T(0));
  impl_->shape = shape;
  impl_->requires_grad = requires_grad;
}

template <class T>
Tensor<T>::Tensor(Shape shape, std::vector<T> values, bool requires_grad) : impl_(std::make_shared<Impl>()) {
  if (static_cast<std::int64_t>(values.size()) != shape.numel()) {
    throw std::invalid_argument("tensor of shape " + shape.str() + " needs " + std::to_string(shape.numel()) +
                                " values, got " + std::to_string(values.size()));
  }
  impl_->shape = shape;
  impl_->data = std::move(values);
  impl_->requires_grad = requires_grad;
}

template <class T>
Tensor<T> Tensor<T>::filled(Shape shape, T value, bool requires_grad) {
  Tensor t(shape, requires_grad);
  std::fill(t.impl_->data.begin(), t.impl_->data.end(), value);
  return t;
}

template <class T>
Tensor<T> Tensor<T>::scalar(T value, bool requires_grad) {
  return Tensor(Shape{1}, std::vector<T>{value}, requires_grad);
}

template <class T>
T Tensor<T>::item() const {
  if (numel() != 1) throw std::invalid_argument("item() on tensor of shape " + shape().str());
  return impl().data[0];
}

template <class T>
std::span<T> Tensor<T>::grad() {
  auto& im = impl();
  if (im.grad.empty()) im.grad.assign(im.data.size(), T(0));
  return im.grad;
}

template <class T>
void Tensor<T>::zero_grad() {
  auto& g = impl().grad;
  std::fill(g.begin(), g.end(), T(0));
}

template <class T>
Tensor<T> Tensor<T>::detach() const {
  return Tensor(shape(), impl().data, false);
}

template <class T>
Tensor<T> Tensor<T>::clone() const {
  return Tensor(shape(), impl().data, requires_grad());
}

template class Tensor<float>;
template class Tensor<double>;

}  // namespace tirvis::diff
