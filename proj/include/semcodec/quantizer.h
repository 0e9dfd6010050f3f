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

#ifndef SEMCODEC_QUANTIZER_H_
#define SEMCODEC_QUANTIZER_H_

#include <cstdint>
#include <vector>

#include "semcodec/graph.h"
#include "semcodec/tensor.h"

namespace semcodec {

// Number of quantization levels the allocator can pick from.
inline constexpr int kNumLevels = 6;
// Softness used while training the encoder/decoder.
inline constexpr double kTrainingSoftness = 10.0;

// Scalar codebook. Level q means 2^q centers spaced uniformly on [-1, 1].
class QuantizerSpec {
 public:
  // Centers must be strictly increasing; softness must be positive.
  explicit QuantizerSpec(std::vector<double> centers, double softness = kTrainingSoftness);
  static QuantizerSpec ForLevel(int level, double softness = kTrainingSoftness);

  const std::vector<double>& centers() const { return centers_; }
  size_t size() const { return centers_.size(); }
  double softness() const { return softness_; }
  // 0 for codebooks not built by ForLevel.
  int level() const { return level_; }

  // Nearest center; equidistant values go to the lower index.
  size_t NearestIndex(double v) const;
  // Largest |v - nearest center| for v inside [front, back].
  double MaxError() const;

 private:
  std::vector<double> centers_;
  double softness_;
  int level_ = 0;
};

struct HardQuantized {
  Tensor values;
  std::vector<uint8_t> symbols;  // center index per entry
};

// Clips to [-1, 1], then nearest-center assignment.
HardQuantized QuantizeHard(const Tensor& features, const QuantizerSpec& spec);

// Per entry: sum_t softmax_t(-softness * |f - c_t|) * c_t.
Tensor QuantizeSoft(const Tensor& features, const QuantizerSpec& spec);
// d QuantizeSoft / d f, entrywise.
Tensor QuantizeSoftDerivative(const Tensor& features, const QuantizerSpec& spec);

// Soft quantization as a graph node.
Var QuantizeSoftGraph(Graph& g, Var features, const QuantizerSpec& spec);
// Forward value = QuantizeHard, gradient = soft derivative at the clipped
// input (zero where clipping was active).
Var QuantizeStraightThrough(Graph& g, Var features, const QuantizerSpec& spec);

Tensor Dequantize(const std::vector<uint8_t>& symbols, const QuantizerSpec& spec,
                  std::vector<size_t> shape);

}  // namespace semcodec

#endif  // SEMCODEC_QUANTIZER_H_
