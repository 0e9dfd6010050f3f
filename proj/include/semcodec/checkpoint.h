// Copyright 2026 The Semcodec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMCODEC_CHECKPOINT_H_
#define SEMCODEC_CHECKPOINT_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semcodec/param_block.h"

namespace semcodec {

inline constexpr uint8_t kCheckpointVersion = 1;

// Named parameter blocks plus string metadata. Layout (little-endian):
// "RLCK" | version u8 | metadata count u16 | (key, value)* | block count u16 |
// per block: name | tensor count u16 | per tensor: name | rank u8 |
// dims u32* | f64 data. Strings are u16 length + bytes.
struct Checkpoint {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::pair<std::string, ParamBlock>> blocks;

  const std::string* FindMeta(const std::string& key) const;
  const ParamBlock* FindBlock(const std::string& name) const;
};

std::vector<uint8_t> SerializeCheckpoint(const Checkpoint& ckpt);
// Throws FormatError / UnsupportedVersionError.
Checkpoint DeserializeCheckpoint(std::span<const uint8_t> bytes);

void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes);
std::vector<uint8_t> ReadFileBytes(const std::string& path);

}  // namespace semcodec

#endif  // SEMCODEC_CHECKPOINT_H_
