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

#include "semcodec/huffman.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace semcodec {

HuffmanTable HuffmanTable::FromLengths(std::vector<Entry> entries) {
  HuffmanTable t;
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.symbol < b.symbol; });
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].length < 1 || entries[i].length > kMaxCodeLength) {
      throw std::invalid_argument("code length out of range for symbol " +
                                  std::to_string(entries[i].symbol));
    }
    if (i && entries[i].symbol == entries[i - 1].symbol) {
      throw std::invalid_argument("duplicate symbol in code table");
    }
  }
  t.entries_ = std::move(entries);
  if (t.KraftSum() > 1.0) throw std::invalid_argument("code lengths violate Kraft inequality");
  t.Canonicalize();
  return t;
}

double HuffmanTable::KraftSum() const {
  double s = 0.0;
  for (const Entry& e : entries_) s += std::ldexp(1.0, -e.length);
  return s;
}

void HuffmanTable::Canonicalize() {
  length_.fill(0);
  code_.fill(0);
  count_.fill(0);
  first_code_.fill(0);
  offset_.fill(0);
  std::vector<Entry> order = entries_;
  std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    return a.length != b.length ? a.length < b.length : a.symbol < b.symbol;
  });
  sorted_symbols_.clear();
  max_length_ = 0;
  uint64_t code = 0;
  int prev_len = order.empty() ? 0 : order.front().length;
  for (size_t i = 0; i < order.size(); ++i) {
    const Entry& e = order[i];
    code <<= (e.length - prev_len);
    prev_len = e.length;
    if (count_[e.length] == 0) {
      first_code_[e.length] = static_cast<uint32_t>(code);
      offset_[e.length] = static_cast<uint32_t>(i);
    }
    ++count_[e.length];
    length_[e.symbol] = e.length;
    code_[e.symbol] = static_cast<uint32_t>(code);
    sorted_symbols_.push_back(e.symbol);
    max_length_ = std::max(max_length_, static_cast<int>(e.length));
    ++code;
  }
}

HuffmanTable HuffmanTable::Build(std::span<const uint8_t> symbols) {
  if (symbols.empty()) throw std::invalid_argument("cannot build a code for no symbols");
  std::array<uint64_t, 256> freq{};
  for (uint8_t s : symbols) ++freq[s];
  return BuildFromFrequencies(freq);
}

HuffmanTable HuffmanTable::BuildFromFrequencies(const std::array<uint64_t, 256>& freq) {
  struct Node {
    uint64_t weight;
    int id;
    int left = -1, right = -1;
    int symbol = -1;
  };
  std::vector<Node> nodes;
  for (int s = 0; s < 256; ++s) {
    if (freq[s]) nodes.push_back({freq[s], static_cast<int>(nodes.size()), -1, -1, s});
  }
  if (nodes.empty()) throw std::invalid_argument("cannot build a code for no symbols");
  if (nodes.size() == 1) {
    return FromLengths({{static_cast<uint8_t>(nodes[0].symbol), 1}});
  }
  // Min-heap on (weight, id); ids make ties deterministic.
  auto cmp = [&nodes](int a, int b) {
    return nodes[a].weight != nodes[b].weight ? nodes[a].weight > nodes[b].weight
                                              : nodes[a].id > nodes[b].id;
  };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> heap(cmp);
  for (size_t i = 0; i < nodes.size(); ++i) heap.push(static_cast<int>(i));
  while (heap.size() > 1) {
    const int a = heap.top();
    heap.pop();
    const int b = heap.top();
    heap.pop();
    nodes.push_back({nodes[a].weight + nodes[b].weight, static_cast<int>(nodes.size()), a, b});
    heap.push(static_cast<int>(nodes.size()) - 1);
  }
  std::vector<Entry> entries;
  std::vector<std::pair<int, int>> stack = {{heap.top(), 0}};
  while (!stack.empty()) {
    auto [idx, depth] = stack.back();
    stack.pop_back();
    const Node& n = nodes[idx];
    if (n.symbol >= 0) {
      if (depth > kMaxCodeLength) throw std::runtime_error("Huffman code too deep");
      entries.push_back({static_cast<uint8_t>(n.symbol), static_cast<uint8_t>(depth)});
    } else {
      stack.push_back({n.left, depth + 1});
      stack.push_back({n.right, depth + 1});
    }
  }
  return FromLengths(std::move(entries));
}

bool HuffmanTable::DecodeOne(const BitVector& bits, size_t& pos, uint8_t& symbol) const {
  int64_t code = 0, first = 0, index = 0;
  for (int len = 1; len <= max_length_; ++len) {
    if (pos >= bits.size()) return false;
    code |= bits.Bit(pos++);
    const int64_t count = count_[len];
    if (code - first < count) {
      symbol = sorted_symbols_[static_cast<size_t>(index + code - first)];
      return true;
    }
    index += count;
    first = (first + count) << 1;
    code <<= 1;
  }
  return false;
}

BitVector HuffmanEncode(std::span<const uint8_t> symbols, const HuffmanTable& table) {
  BitVector out;
  for (uint8_t s : symbols) {
    if (!table.Contains(s)) {
      throw std::invalid_argument("symbol " + std::to_string(s) + " not in code table");
    }
    out.PushBits(table.Code(s), table.Length(s));
  }
  return out;
}

HuffmanDecoded HuffmanDecode(const BitVector& bits, const HuffmanTable& table, size_t count) {
  HuffmanDecoded out;
  out.symbols.reserve(count);
  size_t pos = 0;
  for (size_t i = 0; i < count; ++i) {
    uint8_t s = 0;
    if (table.empty() || !table.DecodeOne(bits, pos, s)) {
      s = 0;
      out.corrupted = true;
    }
    out.symbols.push_back(s);
  }
  if (pos != bits.size()) out.corrupted = true;
  return out;
}

double EmpiricalEntropy(std::span<const uint8_t> symbols) {
  if (symbols.empty()) return 0.0;
  std::array<uint64_t, 256> freq{};
  for (uint8_t s : symbols) ++freq[s];
  double h = 0.0;
  const double n = static_cast<double>(symbols.size());
  for (uint64_t f : freq) {
    if (f) h -= (f / n) * std::log2(f / n);
  }
  return h;
}

}  // namespace semcodec
