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

#ifndef SEMCODEC_BIT_IO_H_
#define SEMCODEC_BIT_IO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace semcodec {

// Growable bit sequence, packed MSB-first into bytes.
class BitVector {
 public:
  BitVector() = default;
  static BitVector FromBytes(std::span<const uint8_t> bytes, size_t num_bits);

  size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  void PushBit(bool bit);
  // Appends the low `count` bits of `value`, most significant first.
  void PushBits(uint64_t value, int count);
  void Append(const BitVector& other);

  bool Bit(size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1; }
  void Flip(size_t i) { bytes_[i >> 3] ^= static_cast<uint8_t>(0x80 >> (i & 7)); }

  // Zero-padded to a whole number of bytes.
  const std::vector<uint8_t>& bytes() const { return bytes_; }

  bool operator==(const BitVector& other) const;

 private:
  std::vector<uint8_t> bytes_;
  size_t size_ = 0;
};

// Bitstream parse failure at a byte offset.
class FormatError : public std::runtime_error {
 public:
  FormatError(size_t offset, const std::string& what)
      : std::runtime_error(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class UnsupportedVersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Little-endian byte writer/reader for the container format.
class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U16(uint16_t v);
  void U32(uint32_t v);
  void F64(double v);
  void Bytes(std::span<const uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void Str(const std::string& s);
  std::vector<uint8_t>& data() { return out_; }

 private:
  std::vector<uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}
  uint8_t U8();
  uint16_t U16();
  uint32_t U32();
  double F64();
  std::span<const uint8_t> Bytes(size_t n);
  std::string Str();
  size_t offset() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void Need(size_t n) const;
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

}  // namespace semcodec

#endif  // SEMCODEC_BIT_IO_H_
