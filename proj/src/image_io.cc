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

#include "semcodec/image_io.h"

#include <cctype>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace semcodec {

namespace {

struct NetpbmHeader {
  std::string magic;
  size_t width = 0, height = 0, maxval = 0;
};

// Reads the next whitespace-delimited token, skipping '#' comments.
std::string Token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

NetpbmHeader ReadHeader(std::istream& in, const std::string& path) {
  NetpbmHeader h;
  h.magic = Token(in);
  try {
    h.width = std::stoul(Token(in));
    h.height = std::stoul(Token(in));
    h.maxval = std::stoul(Token(in));
  } catch (const std::exception&) {
    throw std::runtime_error("malformed netpbm header in '" + path + "'");
  }
  if (h.maxval == 0 || h.maxval > 255) {
    throw std::runtime_error("unsupported netpbm maxval in '" + path + "'");
  }
  return h;
}

std::vector<uint8_t> ReadBytes(std::istream& in, size_t count, const std::string& path) {
  std::vector<uint8_t> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count));
  if (static_cast<size_t>(in.gcount()) != count) {
    throw std::runtime_error("truncated pixel data in '" + path + "'");
  }
  return buf;
}

}  // namespace

void WritePpm(const std::string& path, const Tensor& image) {
  if (image.rank() != 3 || image.dim(0) != 3) {
    throw std::invalid_argument("WritePpm expects [3 x H x W]");
  }
  const size_t H = image.dim(1), W = image.dim(2);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "P6\n" << W << " " << H << "\n255\n";
  std::vector<uint8_t> buf(H * W * 3);
  for (size_t y = 0; y < H; ++y)
    for (size_t x = 0; x < W; ++x)
      for (size_t c = 0; c < 3; ++c)
        buf[(y * W + x) * 3 + c] = static_cast<uint8_t>(
            std::lround(std::clamp(image.at(c, y, x), 0.0, 1.0) * 255.0));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

Tensor ReadPpm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const NetpbmHeader h = ReadHeader(in, path);
  if (h.magic != "P6") throw std::runtime_error("'" + path + "' is not a binary PPM");
  const auto buf = ReadBytes(in, h.width * h.height * 3, path);
  Tensor image({3, h.height, h.width});
  for (size_t y = 0; y < h.height; ++y)
    for (size_t x = 0; x < h.width; ++x)
      for (size_t c = 0; c < 3; ++c)
        image.at(c, y, x) = buf[(y * h.width + x) * 3 + c] / static_cast<double>(h.maxval);
  return image;
}

void WritePgm(const std::string& path, const LabelMap& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "P5\n" << labels.width() << " " << labels.height() << "\n255\n";
  std::vector<uint8_t> buf(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) buf[i] = static_cast<uint8_t>(labels[i]);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

LabelMap ReadPgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  const NetpbmHeader h = ReadHeader(in, path);
  if (h.magic != "P5") throw std::runtime_error("'" + path + "' is not a binary PGM");
  const auto buf = ReadBytes(in, h.width * h.height, path);
  std::vector<int> labels(buf.begin(), buf.end());
  return LabelMap(h.height, h.width, std::move(labels));
}

}  // namespace semcodec
