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

#ifndef TIRVIS_SRC_GEMM_HPP
#define TIRVIS_SRC_GEMM_HPP

#include <cstdint>

namespace tirvis::diff::detail {

enum class Trans { kNo, kYes };

/// C[m x n] (+)= op(A) * op(B) on dense row-major buffers. A is stored as
/// m x k (or k x m when transposed), B as k x n (or n x k).
///
/// The output is split into fixed-size tiles that are computed
/// independently, so every element's reduction order depends only on the
/// problem shape, never on how many threads run the tiles.
template <class T>
void gemm(Trans ta, Trans tb, std::int64_t m, std::int64_t n, std::int64_t k, const T* a, const T* b, T* c,
          bool accumulate);

extern template void gemm<float>(Trans, Trans, std::int64_t, std::int64_t, std::int64_t, const float*,
                                 const float*, float*, bool);
extern template void gemm<double>(Trans, Trans, std::int64_t, std::int64_t, std::int64_t, const double*,
                                  const double*, double*, bool);

}  // namespace tirvis::diff::detail

#endif  // TIRVIS_SRC_GEMM_HPP
