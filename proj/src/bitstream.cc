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

#include "semcodec/bitstream.h"

#include <stdexcept>

namespace semcodec {

namespace {

constexpr size_t kHeaderBytes = 4 + 1 + 2 * 4 + 1;
// level u8 + payload length u32 + table count u16.
constexpr size_t kSegmentFixedBytes = 1 + 4 + 2;

}  // namespace

std::vector<uint8_t> Serialize(const SemanticBitstream& stream) {
  if (stream.concepts.size() != stream.num_classes) {
    throw std::invalid_argument("bitstream holds " + std::to_string(stream.concepts.size()) +
                                " segments for M=" + std::to_string(stream.num_classes));
  }
  ByteWriter out;
  for (char c : kBitstreamMagic) out.U8(static_cast<uint8_t>(c));
  out.U8(kBitstreamVersion);
  out.U16(stream.num_classes);
  out.U16(stream.channels);
  out.U16(stream.width);
  out.U16(stream.height);
  out.U8(stream.num_levels);
  for (const ConceptSegment& seg : stream.concepts) {
    if (seg.payload.size() > 0xFFFFFFFFu) throw std::invalid_argument("payload too long");
    out.U8(seg.level);
    out.U32(static_cast<uint32_t>(seg.payload.size()));
    out.U16(static_cast<uint16_t>(seg.table.entries().size()));
    for (const HuffmanTable::Entry& e : seg.table.entries()) {
      out.U8(e.symbol);
      out.U8(e.length);
    }
    out.Bytes(seg.payload.bytes());
  }
  out.U32(static_cast<uint32_t>(stream.label_runs.size()));
  for (const RleEntry& e : stream.label_runs) {
    out.U8(e.class_id);
    out.U16(e.run);
  }
  return std::move(out.data());
}

SemanticBitstream Deserialize(std::span<const uint8_t> bytes) {
  ByteReader in(bytes);
  for (char c : kBitstreamMagic) {
    const size_t at = in.offset();
    if (in.U8() != static_cast<uint8_t>(c)) throw FormatError(at, "bad magic");
  }
  const size_t version_at = in.offset();
  const uint8_t version = in.U8();
  if (version != kBitstreamVersion) {
    throw UnsupportedVersionError(version_at,
                                  "unsupported bitstream version " + std::to_string(version));
  }
  SemanticBitstream s;
  const size_t dims_at = in.offset();
  s.num_classes = in.U16();
  s.channels = in.U16();
  s.width = in.U16();
  s.height = in.U16();
  s.num_levels = in.U8();
  if (s.num_classes == 0 || s.channels == 0 || s.width == 0 || s.height == 0 ||
      s.num_levels == 0) {
    throw FormatError(dims_at, "zero dimension in header");
  }
  for (uint16_t m = 0; m < s.num_classes; ++m) {
    ConceptSegment seg;
    const size_t seg_at = in.offset();
    seg.level = in.U8();
    if (seg.level < 1 || seg.level > s.num_levels) {
      throw FormatError(seg_at, "quantization level " + std::to_string(seg.level) +
                                    " outside [1, " + std::to_string(s.num_levels) + "]");
    }
    const uint32_t nbits = in.U32();
    const size_t table_at = in.offset();
    const uint16_t count = in.U16();
    std::vector<HuffmanTable::Entry> entries(count);
    for (auto& e : entries) {
      e.symbol = in.U8();
      e.length = in.U8();
    }
    try {
      seg.table = HuffmanTable::FromLengths(std::move(entries));
    } catch (const std::invalid_argument& e) {
      throw FormatError(table_at, std::string("invalid code table: ") + e.what());
    }
    if (nbits > 0 && seg.table.empty()) throw FormatError(table_at, "payload without table");
    seg.payload = BitVector::FromBytes(in.Bytes((size_t{nbits} + 7) / 8), nbits);
    s.concepts.push_back(std::move(seg));
  }
  const uint32_t runs = in.U32();
  const size_t runs_at = in.offset();
  if (size_t{runs} * 3 > bytes.size() - runs_at) {
    throw FormatError(runs_at, "truncated label map");
  }
  s.label_runs.resize(runs);
  for (RleEntry& e : s.label_runs) {
    e.class_id = in.U8();
    e.run = in.U16();
  }
  if (!in.done()) throw FormatError(in.offset(), "trailing bytes after label map");
  return s;
}

RateBreakdown ComputeRate(const SemanticBitstream& stream) {
  RateBreakdown r;
  r.overhead_bits = kHeaderBytes * 8;
  for (const ConceptSegment& seg : stream.concepts) {
    r.payload_bits += seg.payload.size();
    r.overhead_bits += (kSegmentFixedBytes + 2 * seg.table.entries().size()) * 8;
    // Byte padding of the payload.
    r.overhead_bits += (8 - seg.payload.size() % 8) % 8;
  }
  r.label_bits = LabelMapBitLength(stream.label_runs.size());
  const double pixels = static_cast<double>(stream.pixels());
  if (pixels > 0) {
    r.psi = static_cast<double>(r.payload_bits + r.label_bits) / pixels;
    r.file_bpp = static_cast<double>(r.payload_bits + r.label_bits + r.overhead_bits) / pixels;
  }
  return r;
}

}  // namespace semcodec
