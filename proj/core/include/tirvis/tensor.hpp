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

#ifndef TIRVIS_TENSOR_HPP
#define TIRVIS_TENSOR_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tirvis::diff {

/// Extents of a rank-1..4 row-major array.
class Shape {
 public:
  static constexpr int kMaxRank = 4;

  Shape() = default;
  Shape(std::initializer_list<std::int64_t> extents);
  explicit Shape(std::span<const std::int64_t> extents);

  int rank() const { return rank_; }
  std::int64_t operator[](int axis) const { return dims_.at(axis); }
  std::int64_t numel() const;
  std::span<const std::int64_t> extents() const { return {dims_.data(), static_cast<std::size_t>(rank_)}; }

  std::string str() const;

  friend bool operator==(const Shape& a, const Shape& b) {
    return a.rank_ == b.rank_ && std::equal(a.dims_.begin(), a.dims_.begin() + a.rank_, b.dims_.begin());
  }

 private:
  std::array<std::int64_t, kMaxRank> dims_{};
  int rank_ = 0;
};

/// Shared handle to a differentiable array.
///
/// Copies alias the same storage, so a gradient accumulated through one copy is
/// visible through every other. Use clone() or detach() for an independent
/// array.
template <class T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<T> values, bool requires_grad = false);
  Tensor(Shape shape, std::initializer_list<T> values, bool requires_grad = false)
      : Tensor(shape, std::vector<T>(values), requires_grad) {}

  static Tensor filled(Shape shape, T value, bool requires_grad = false);
  static Tensor scalar(T value, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl().shape; }
  std::int64_t numel() const { return impl().shape.numel(); }

  std::span<T> data() { return impl().data; }
  std::span<const T> data() const { return impl().data; }
  T item() const;

  bool requires_grad() const { return impl().requires_grad; }
  void set_requires_grad(bool flag) { impl().requires_grad = flag; }

  /// Gradient buffer; allocated (zero-filled) on first access.
  std::span<T> grad();
  std::span<const T> grad() const { return impl().grad; }
  bool has_grad() const { return !impl().grad.empty(); }
  void zero_grad();

  /// Independent copy of the values with no gradient tracking.
  Tensor detach() const;
  /// Independent copy of values and flags; gradient buffer is not copied.
  Tensor clone() const;

  bool same_storage(const Tensor& other) const { return impl_ == other.impl_; }

 private:
  struct Impl {
    Shape shape;
    std::vector<T> data;
    std::vector<T> grad;
    bool requires_grad = false;
  };

  Impl& impl() {
    if (!impl_) throw std::logic_error("use of an undefined tensor");
    return *impl_;
  }
  const Impl& impl() const {
    if (!impl_) throw std::logic_error("use of an undefined tensor");
    return *impl_;
  }

  std::shared_ptr<Impl> impl_;
};

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace tirvis::diff

#endif  // TIRVIS_TENSOR_HPP
