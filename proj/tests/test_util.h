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

#ifndef SEMCODEC_TESTS_TEST_UTIL_H_
#define SEMCODEC_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "semcodec/bitstream.h"
#include "semcodec/huffman.h"
#include "semcodec/param_block.h"
#include "semcodec/rng.h"
#include "semcodec/scene.h"
#include "semcodec/tensor.h"

namespace semcodec::testing {

// Smaller scenes for unit tests: 16x32 pixels, 2x4 cells.
inline SceneConfig SmallScene(size_t num_classes = 4) {
  SceneConfig c;
  c.height = 16;
  c.width = 32;
  c.num_classes = num_classes;
  return c;
}

inline Tensor RandomTensor(std::vector<size_t> shape, RngStream& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = scale * rng.Normal();
  return t;
}

// Central differences of `f` with respect to every scalar of `block`.
inline std::vector<double> NumericGradient(ParamBlock& block, const std::function<double()>& f,
                                           double h = 1e-6) {
  std::vector<double> theta = block.FlatValues();
  std::vector<double> grad(theta.size());
  for (size_t i = 0; i < theta.size(); ++i) {
    const double keep = theta[i];
    theta[i] = keep + h;
    block.SetFlatValues(theta);
    const double up = f();
    theta[i] = keep - h;
    block.SetFlatValues(theta);
    const double down = f();
    theta[i] = keep;
    grad[i] = (up - down) / (2 * h);
  }
  block.SetFlatValues(theta);
  return grad;
}

// max_i |a_i - b_i| / max(1, max_i |b_i|).
inline double RelativeError(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 1.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

// Cheapest prefix code cost over all length assignments (Kraft <= 1).
inline uint64_t ExhaustiveBestCost(const std::vector<uint64_t>& freq) {
  const size_t k = freq.size();
  if (k == 1) return freq[0];
  uint64_t best = std::numeric_limits<uint64_t>::max();
  std::vector<int> len(k, 1);
  while (true) {
    double kraft = 0.0;
    uint64_t cost = 0;
    for (size_t i = 0; i < k; ++i) {
      kraft += std::ldexp(1.0, -len[i]);
      cost += freq[i] * static_cast<uint64_t>(len[i]);
    }
    if (kraft <= 1.0) best = std::min(best, cost);
    size_t i = 0;
    while (i < k && ++len[i] > static_cast<int>(k)) len[i++] = 1;
    if (i == k) return best;
  }
}

// Random container with valid tables, payloads and label runs.
inline SemanticBitstream RandomStream(RngStream& rng) {
  SemanticBitstream s;
  s.num_classes = static_cast<uint16_t>(2 + rng.UniformInt(6));
  s.channels = static_cast<uint16_t>(1 + rng.UniformInt(16));
  s.width = static_cast<uint16_t>(1 + rng.UniformInt(8));
  s.height = static_cast<uint16_t>(1 + rng.UniformInt(4));
  for (size_t m = 0; m < s.num_classes; ++m) {
    ConceptSegment seg;
    seg.level = static_cast<uint8_t>(1 + rng.UniformInt(6));
    if (rng.Uniform() < 0.8) {
      std::vector<uint8_t> syms(1 + rng.UniformInt(200));
      for (uint8_t& v : syms) v = static_cast<uint8_t>(rng.UniformInt(size_t{1} << seg.level));
      seg.table = HuffmanTable::Build(syms);
      seg.payload = HuffmanEncode(syms, seg.table);
    }
    s.concepts.push_back(std::move(seg));
  }
  size_t left = s.pixels();
  while (left > 0) {
    const uint16_t run = static_cast<uint16_t>(std::min<size_t>(left, 1 + rng.UniformInt(200)));
    s.label_runs.push_back({static_cast<uint8_t>(1 + rng.UniformInt(s.num_classes)), run});
    left -= run;
  }
  return s;
}

}  // namespace semcodec::testing

#endif  // SEMCODEC_TESTS_TEST_UTIL_H_
