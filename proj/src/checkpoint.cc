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

#include "semcodec/checkpoint.h"

#include <fstream>
#include <iterator>
#include <stdexcept>

#include "semcodec/bit_io.h"

namespace semcodec {

namespace {

constexpr char kMagic[4] = {'R', 'L', 'C', 'K'};

}  // namespace

const std::string* Checkpoint::FindMeta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

const ParamBlock* Checkpoint::FindBlock(const std::string& name) const {
  for (const auto& [k, b] : blocks)
    if (k == name) return &b;
  return nullptr;
}

std::vector<uint8_t> SerializeCheckpoint(const Checkpoint& ckpt) {
  ByteWriter out;
  for (char c : kMagic) out.U8(static_cast<uint8_t>(c));
  out.U8(kCheckpointVersion);
  out.U16(static_cast<uint16_t>(ckpt.metadata.size()));
  for (const auto& [k, v] : ckpt.metadata) {
    out.Str(k);
    out.Str(v);
  }
  out.U16(static_cast<uint16_t>(ckpt.blocks.size()));
  for (const auto& [name, block] : ckpt.blocks) {
    out.Str(name);
    out.U16(static_cast<uint16_t>(block.entries().size()));
    for (const ParamBlock::Entry& e : block.entries()) {
      out.Str(e.name);
      out.U8(static_cast<uint8_t>(e.value.rank()));
      for (size_t d : e.value.shape()) out.U32(static_cast<uint32_t>(d));
      for (double v : e.value.values()) out.F64(v);
    }
  }
  return std::move(out.data());
}

Checkpoint DeserializeCheckpoint(std::span<const uint8_t> bytes) {
  ByteReader in(bytes);
  for (char c : kMagic) {
    const size_t at = in.offset();
    if (in.U8() != static_cast<uint8_t>(c)) throw FormatError(at, "bad checkpoint magic");
  }
  const size_t version_at = in.offset();
  const uint8_t version = in.U8();
  if (version != kCheckpointVersion) {
    throw UnsupportedVersionError(version_at,
                                  "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const uint16_t nmeta = in.U16();
  for (uint16_t i = 0; i < nmeta; ++i) {
    std::string k = in.Str();
    std::string v = in.Str();
    ckpt.metadata.emplace_back(std::move(k), std::move(v));
  }
  const uint16_t nblocks = in.U16();
  for (uint16_t b = 0; b < nblocks; ++b) {
    std::string name = in.Str();
    ParamBlock block;
    const uint16_t ntensors = in.U16();
    for (uint16_t t = 0; t < ntensors; ++t) {
      const size_t at = in.offset();
      std::string tname = in.Str();
      const uint8_t rank = in.U8();
      std::vector<size_t> shape(rank);
      size_t count = 1;
      for (size_t& d : shape) {
        d = in.U32();
        count *= d;
      }
      if (count * 8 > bytes.size() - in.offset()) throw FormatError(at, "truncated tensor");
      std::vector<double> data(count);
      for (double& v : data) v = in.F64();
      try {
        block.Add(tname, Tensor(std::move(shape), std::move(data)));
      } catch (const std::invalid_argument& e) {
        throw FormatError(at, e.what());
      }
    }
    ckpt.blocks.emplace_back(std::move(name), std::move(block));
  }
  if (!in.done()) throw FormatError(in.offset(), "trailing bytes in checkpoint");
  return ckpt;
}

void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(f), {});
}

}  // namespace semcodec
