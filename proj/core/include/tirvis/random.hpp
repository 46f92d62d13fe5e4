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

#ifndef TIRVIS_RANDOM_HPP
#define TIRVIS_RANDOM_HPP

#include <cstdint>
#include <string_view>

namespace tirvis {

/// SplitMix64 stream addressed by (key, counter).
///
/// The whole state is two integers, so it serializes trivially and the
/// sequence is identical on every platform. Distributions are implemented
/// here rather than with <random> because the standard leaves their
/// algorithms unspecified.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key = 0, std::uint64_t counter = 0) : key_(key), counter_(counter) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via Box-Muller; consumes two draws per call.
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Independent stream key for a named purpose under a run seed.
std::uint64_t derive_key(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0);

}  // namespace tirvis

#endif  // TIRVIS_RANDOM_HPP
