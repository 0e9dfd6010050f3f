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

#include "semcodec/label_rle.h"

#include <algorithm>
#include <stdexcept>

namespace semcodec {

std::vector<RleEntry> RunLengthEncode(const LabelMap& labels) {
  std::vector<RleEntry> out;
  const auto& v = labels.labels();
  size_t i = 0;
  while (i < v.size()) {
    const int c = v[i];
    if (c < 1 || c > 255) {
      throw std::invalid_argument("label " + std::to_string(c) + " not codable in 8 bits");
    }
    size_t j = i;
    while (j < v.size() && v[j] == c && j - i < kMaxRun) ++j;
    out.push_back({static_cast<uint8_t>(c), static_cast<uint16_t>(j - i)});
    i = j;
  }
  return out;
}

LabelMap RunLengthDecode(const std::vector<RleEntry>& entries, size_t height, size_t width) {
  std::vector<int> v;
  v.reserve(height * width);
  for (const RleEntry& e : entries) {
    if (e.class_id == 0 || e.run == 0) throw std::invalid_argument("invalid run-length entry");
    if (v.size() + e.run > height * width) {
      throw std::invalid_argument("run-length entries overflow the label grid");
    }
    v.insert(v.end(), e.run, e.class_id);
  }
  if (v.size() != height * width) {
    throw std::invalid_argument("run-length entries cover " + std::to_string(v.size()) +
                                " of " + std::to_string(height * width) + " pixels");
  }
  return LabelMap(height, width, std::move(v));
}

SanitizedLabels RunLengthDecodeSanitized(const std::vector<RleEntry>& entries, size_t height,
                                         size_t width, int num_classes) {
  SanitizedLabels out;
  const size_t total = height * width;
  std::vector<int> v;
  v.reserve(total);
  for (const RleEntry& e : entries) {
    int c = e.class_id;
    if (c < 1 || c > num_classes) {
      c = std::clamp(c, 1, num_classes);
      out.repaired = true;
    }
    size_t run = e.run;
    if (v.size() + run > total) {
      run = total - v.size();
      out.repaired = true;
    }
    v.insert(v.end(), run, c);
  }
  if (v.size() < total) {
    out.repaired = true;
    v.resize(total, v.empty() ? 1 : v.back());
  }
  out.labels = LabelMap(height, width, std::move(v));
  return out;
}

BitVector RleEntryBits(const std::vector<RleEntry>& entries) {
  BitVector bits;
  for (const RleEntry& e : entries) {
    bits.PushBits(e.class_id, 8);
    bits.PushBits(e.run, 16);
  }
  return bits;
}

std::vector<RleEntry> RleEntriesFromBits(const BitVector& bits, size_t count) {
  if (bits.size() != count * kRleEntryBits) {
    throw std::invalid_argument("label bit length does not match entry count");
  }
  std::vector<RleEntry> out(count);
  size_t pos = 0;
  for (RleEntry& e : out) {
    uint32_t c = 0, r = 0;
    for (int i = 0; i < 8; ++i) c = (c << 1) | bits.Bit(pos++);
    for (int i = 0; i < 16; ++i) r = (r << 1) | bits.Bit(pos++);
    e = {static_cast<uint8_t>(c), static_cast<uint16_t>(r)};
  }
  return out;
}

}  // namespace semcodec
