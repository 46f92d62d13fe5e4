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

#define EIGEN_DONT_PARALLELIZE
#include "gemm.hpp"

#include <Eigen/Core>
#include <algorithm>

namespace tirvis::diff::detail {
namespace {

constexpr std::int64_t kTileRows = 256;
constexpr std::int64_t kTileCols = 4096;
// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::int64_t kParallelWork = std::int64_t{1} << 22;

template <class T, class LhsExpr, class RhsExpr>
void tiled_product(const LhsExpr& lhs, const RhsExpr& rhs, T* c, std::int64_t m, std::int64_t n, std::int64_t k,
                   bool accumulate) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<Mat> out(c, m, n);
  const std::int64_t tiles_m = (m + kTileRows - 1) / kTileRows;
  const std::int64_t tiles_n = (n + kTileCols - 1) / kTileCols;
  const std::int64_t tiles = tiles_m * tiles_n;
  [[maybe_unused]] const bool parallel = tiles > 1 && m * n * k >= kParallelWork;

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t t = 0; t < tiles; ++t) {
    const std::int64_t i = (t / tiles_n) * kTileRows;
    const std::int64_t j = (t % tiles_n) * kTileCols;
    const std::int64_t rows = std::min(kTileRows, m - i);
    const std::int64_t cols = std::min(kTileCols, n - j);
    auto block = out.block(i, j, rows, cols);
    if (accumulate) {
      block.noalias() += lhs.middleRows(i, rows) * rhs.middleCols(j, cols);
    } else {
      block.noalias() = lhs.middleRows(i, rows) * rhs.middleCols(j, cols);
    }
  }
}

}  // namespace

template <class T>
void gemm(Trans ta, Trans tb, std::int64_t m, std::int64_t n, std::int64_t k, const T* a, const T* b, T* c,
          bool accumulate) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using ConstMap = Eigen::Map<const Mat>;
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (!accumulate) std::fill(c, c + m * n, T(0));
    return;
  }
  if (ta == Trans::kNo && tb == Trans::kNo) {
    tiled_product<T>(ConstMap(a, m, k), ConstMap(b, k, n), c, m, n, k, accumulate);
  } else if (ta == Trans::kNo) {
    tiled_product<T>(ConstMap(a, m, k), ConstMap(b, n, k).transpose(), c, m, n, k, accumulate);
  } else if (tb == Trans::kNo) {
    tiled_product<T>(ConstMap(a, k, m).transpose(), ConstMap(b, k, n), c, m, n, k, accumulate);
  } else {
    tiled_product<T>(ConstMap(a, k, m).transpose(), ConstMap(b, n, k).transpose(), c, m, n, k, accumulate);
  }
}

template void gemm<float>(Trans, Trans, std::int64_t, std::int64_t, std::int64_t, const float*, const float*,
                          float*, bool);
template void gemm<double>(Trans, Trans, std::int64_t, std::int64_t, std::int64_t, const double*,
                           const double*, double*, bool);

}  // namespace tirvis::diff::detail
