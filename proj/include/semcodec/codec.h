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

#ifndef SEMCODEC_CODEC_H_
#define SEMCODEC_CODEC_H_

#include <cstdint>
#include <vector>

#include "semcodec/bitstream.h"
#include "semcodec/concepts.h"
#include "semcodec/quantizer.h"

namespace semcodec {

// Concept payloads carry only the masked cells: symbol k belongs to the
// (k / n)-th set cell of s_d in raster order, channel k % n. A concept with
// an empty mask has an empty payload and an empty table.
ConceptSegment EncodeConcept(const Tensor& features, const std::vector<uint8_t>& down_mask,
                             int level);

struct DecodedConcept {
  Tensor features;  // [n x h x w], zero off-mask
  bool corrupted = false;
};

DecodedConcept DecodeConcept(const ConceptSegment& segment,
                             const std::vector<uint8_t>& down_mask, size_t channels,
                             size_t h, size_t w);

// Quantizes the masked cells of `features` at `level` and dequantizes them,
// leaving other cells untouched at zero.
Tensor QuantizeConceptFeatures(const Tensor& features, const std::vector<uint8_t>& down_mask,
                               int level);

// Full encoder back end: concept m (1-based) coded at levels[m-1], label map
// run-length coded at full resolution.
SemanticBitstream EncodeScene(const Tensor& features, const LabelMap& labels,
                              const std::vector<int>& levels, size_t num_classes);

struct DecodedScene {
  LabelMap labels;               // full resolution
  LabelMap down_labels;          // h x w
  std::vector<SemanticMask> masks;
  Tensor features;               // [n x h x w], sum of decoded concepts
  std::vector<Tensor> concept_features;
  bool corrupted = false;        // any segment or the label map needed repair
};

DecodedScene DecodeScene(const SemanticBitstream& stream);

}  // namespace semcodec

#endif  // SEMCODEC_CODEC_H_
