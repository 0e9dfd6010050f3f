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

#ifndef SEMCODEC_HUFFMAN_H_
#define SEMCODEC_HUFFMAN_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "semcodec/bit_io.h"

namespace semcodec {

inline constexpr int kMaxCodeLength = 32;

// Canonical prefix code over byte symbols. Only code lengths are stored;
// codewords are assigned in (length, symbol) order.
class HuffmanTable {
 public:
  struct Entry {
    uint8_t symbol;
    uint8_t length;
    bool operator==(const Entry&) const = default;
  };

  HuffmanTable() = default;

  // Validates lengths in [1, 32], distinct symbols and the Kraft inequality.
  static HuffmanTable FromLengths(std::vector<Entry> entries);

  // Optimal code for the empirical frequencies of `symbols`. A single
  // distinct symbol gets a 1-bit code. Throws on empty input.
  static HuffmanTable Build(std::span<const uint8_t> symbols);
  static HuffmanTable BuildFromFrequencies(const std::array<uint64_t, 256>& freq);

  // Entries sorted by symbol.
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  bool Contains(uint8_t symbol) const { return length_[symbol] != 0; }
  int Length(uint8_t symbol) const { return length_[symbol]; }
  uint32_t Code(uint8_t symbol) const { return code_[symbol]; }
  double KraftSum() const;

  bool operator==(const HuffmanTable& other) const { return entries_ == other.entries_; }

  // Decodes one codeword starting at bits[pos]. Returns false (and leaves
  // `pos` past the bits it consumed) when the bits run out or no codeword
  // matches within the longest length.
  bool DecodeOne(const BitVector& bits, size_t& pos, uint8_t& symbol) const;

 private:
  void Canonicalize();

  std::vector<Entry> entries_;
  std::array<uint8_t, 256> length_{};
  std::array<uint32_t, 256> code_{};
  // Canonical decode tables indexed by length.
  std::array<uint32_t, kMaxCodeLength + 2> first_code_{};
  std::array<uint32_t, kMaxCodeLength + 2> count_{};
  std::array<uint32_t, kMaxCodeLength + 2> offset_{};
  std::vector<uint8_t> sorted_symbols_;
  int max_length_ = 0;
};

// Concatenated codewords, MSB first. Throws on a symbol not in the table.
BitVector HuffmanEncode(std::span<const uint8_t> symbols, const HuffmanTable& table);

struct HuffmanDecoded {
  std::vector<uint8_t> symbols;
  // Set when a codeword was invalid, the bits ran out before `count`
  // symbols, or bits were left over. Undetectable corruption stays unset.
  bool corrupted = false;
};

// Always returns exactly `count` symbols; failures decode as symbol 0.
HuffmanDecoded HuffmanDecode(const BitVector& bits, const HuffmanTable& table, size_t count);

// Empirical entropy in bits/symbol.
double EmpiricalEntropy(std::span<const uint8_t> symbols);

}  // namespace semcodec

#endif  // SEMCODEC_HUFFMAN_H_
