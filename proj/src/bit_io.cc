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

#include "semcodec/bit_io.h"

#include <bit>
#include <cstring>

namespace semcodec {

BitVector BitVector::FromBytes(std::span<const uint8_t> bytes, size_t num_bits) {
  if (bytes.size() * 8 < num_bits) throw std::invalid_argument("not enough bytes for bits");
  BitVector v;
  v.bytes_.assign(bytes.begin(), bytes.begin() + static_cast<long>((num_bits + 7) / 8));
  v.size_ = num_bits;
  // Padding bits are zero by contract.
  if (num_bits % 8) v.bytes_.back() &= static_cast<uint8_t>(0xFF << (8 - num_bits % 8));
  return v;
}

void BitVector::PushBit(bool bit) {
  if ((size_ & 7) == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<uint8_t>(0x80 >> (size_ & 7));
  ++size_;
}

void BitVector::PushBits(uint64_t value, int count) {
  for (int i = count - 1; i >= 0; --i) PushBit((value >> i) & 1);
}

void BitVector::Append(const BitVector& other) {
  for (size_t i = 0; i < other.size(); ++i) PushBit(other.Bit(i));
}

bool BitVector::operator==(const BitVector& other) const {
  return size_ == other.size_ && bytes_ == other.bytes_;
}

void ByteWriter::U16(uint16_t v) {
  U8(static_cast<uint8_t>(v & 0xFF));
  U8(static_cast<uint8_t>(v >> 8));
}

void ByteWriter::U32(uint32_t v) {
  for (int i = 0; i < 4; ++i) U8(static_cast<uint8_t>((v >> (8 * i)) & 0xFF));
}

void ByteWriter::F64(double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) U8(static_cast<uint8_t>((bits >> (8 * i)) & 0xFF));
}

void ByteWriter::Str(const std::string& s) {
  if (s.size() > 0xFFFF) throw std::invalid_argument("string too long to serialize");
  U16(static_cast<uint16_t>(s.size()));
  Bytes(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

void ByteReader::Need(size_t n) const {
  if (pos_ + n > in_.size()) {
    throw FormatError(pos_, "truncated input: need " + std::to_string(n) + " more bytes");
  }
}

uint8_t ByteReader::U8() {
  Need(1);
  return in_[pos_++];
}

uint16_t ByteReader::U16() {
  Need(2);
  const uint16_t v = static_cast<uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

uint32_t ByteReader::U32() {
  Need(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(in_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

double ByteReader::F64() {
  Need(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return std::bit_cast<double>(v);
}

std::span<const uint8_t> ByteReader::Bytes(size_t n) {
  Need(n);
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::string ByteReader::Str() {
  const uint16_t n = U16();
  auto b = Bytes(n);
  return std::string(b.begin(), b.end());
}

}  // namespace semcodec
