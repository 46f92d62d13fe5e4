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

#ifndef TIRVIS_CHECKPOINT_HPP
#define TIRVIS_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "tirvis/trainer.hpp"

namespace tirvis::train {

/// Byte layout, all integers little-endian:
///
///   magic    8 bytes  "TIRCGAN\0"
///   version  u32      kCheckpointVersion
///   config   u32 length, then TrainConfig::to_text() bytes
///   count    u32 number of records
///   record   u32 name length, name bytes, u8 dtype (0 = f32, 1 = u64),
///            u8 rank, u64 extent per axis, then the values
///
/// Records, in order: the parameters of G, F, D_X and D_Y (prefixed "G.",
/// "F.", "D_X.", "D_Y."), Adam state ("adam.<group>.t", then ".m.<param>"
/// and ".v.<param>"), fake buffers ("buffer_x.rng" as [key, counter] and
/// "buffer_x.image.<i>"), then "trainer.step" and "trainer.epoch".
inline constexpr char kCheckpointMagic[8] = {'T', 'I', 'R', 'C', 'G', 'A', 'N', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> serialize_checkpoint(const TrainState& state);
/// Throws CheckpointError on bad magic, unsupported version, truncation,
/// trailing bytes, or records that do not match the stored configuration.
TrainState deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const TrainState& state, const std::filesystem::path& path);
TrainState load_checkpoint(const std::filesystem::path& path);

}  // namespace tirvis::train

#endif  // TIRVIS_CHECKPOINT_HPP
