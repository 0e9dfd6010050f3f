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

#ifndef SEMCODEC_BITSTREAM_H_
#define SEMCODEC_BITSTREAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "semcodec/bit_io.h"
#include "semcodec/huffman.h"
#include "semcodec/label_rle.h"

namespace semcodec {

inline constexpr uint8_t kBitstreamVersion = 1;
inline constexpr char kBitstreamMagic[4] = {'R', 'L', 'S', 'C'};

// Coded features of one class. Concept m is stored at index m-1.
struct ConceptSegment {
  uint8_t level = 1;
  HuffmanTable table;
  BitVector payload;

  bool operator==(const ConceptSegment&) const = default;
};

struct SemanticBitstream {
  uint16_t num_classes = 0;  // M
  uint16_t channels = 0;     // n
  uint16_t width = 0;        // w = W/8
  uint16_t height = 0;       // h = H/8
  uint8_t num_levels = 6;    // Q
  std::vector<ConceptSegment> concepts;
  std::vector<RleEntry> label_runs;

  size_t pixels() const { return size_t{height} * width * 64; }
  bool operator==(const SemanticBitstream&) const = default;
};

// Little-endian container; see README for the byte layout.
std::vector<uint8_t> Serialize(const SemanticBitstream& stream);
// Throws FormatError (with the byte offset) on bad magic, truncation,
// invalid tables or trailing bytes; UnsupportedVersionError on a version
// other than kBitstreamVersion.
SemanticBitstream Deserialize(std::span<const uint8_t> bytes);

struct RateBreakdown {
  size_t payload_bits = 0;   // sum over concepts of l(r^(m))
  size_t label_bits = 0;     // l(r_s)
  size_t overhead_bits = 0;  // header, levels, length fields, tables
  double psi = 0.0;          // (label_bits + payload_bits) / (H*W)
  double file_bpp = 0.0;     // everything / (H*W)
};

RateBreakdown ComputeRate(const SemanticBitstream& stream);
inline double RatePsi(const SemanticBitstream& stream) { return ComputeRate(stream).psi; }

}  // namespace semcodec

#endif  // SEMCODEC_BITSTREAM_H_
