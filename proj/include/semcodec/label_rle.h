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

#ifndef SEMCODEC_LABEL_RLE_H_
#define SEMCODEC_LABEL_RLE_H_

#include <cstdint>
#include <vector>

#include "semcodec/bit_io.h"
#include "semcodec/scene.h"

namespace semcodec {

inline constexpr int kRleEntryBits = 24;  // class u8 + run u16
inline constexpr int kRleCountBits = 32;
inline constexpr uint32_t kMaxRun = 0xFFFF;

struct RleEntry {
  uint8_t class_id;
  uint16_t run;
  bool operator==(const RleEntry&) const = default;
};

// Row-major runs; runs longer than 65535 are split. Entries must lie in
// [1, 255].
std::vector<RleEntry> RunLengthEncode(const LabelMap& labels);

// Exact inverse. Throws std::invalid_argument unless the runs cover exactly
// height*width pixels with nonzero classes.
LabelMap RunLengthDecode(const std::vector<RleEntry>& entries, size_t height, size_t width);

struct SanitizedLabels {
  LabelMap labels;
  bool repaired = false;
};

// Total decode for entries that may have crossed a noisy channel: classes
// are clamped to [1, num_classes], pixels beyond the grid are dropped and
// missing trailing pixels repeat the last class (or 1).
SanitizedLabels RunLengthDecodeSanitized(const std::vector<RleEntry>& entries, size_t height,
                                         size_t width, int num_classes);

// Entries as 24-bit groups, MSB first (no count field).
BitVector RleEntryBits(const std::vector<RleEntry>& entries);
std::vector<RleEntry> RleEntriesFromBits(const BitVector& bits, size_t count);

// l(r_s): count field plus entries.
inline size_t LabelMapBitLength(size_t num_entries) {
  return kRleCountBits + kRleEntryBits * num_entries;
}

}  // namespace semcodec

#endif  // SEMCODEC_LABEL_RLE_H_
