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

#include "semcodec/codec.h"

#include <stdexcept>

namespace semcodec {

namespace {

void CheckGrid(const Tensor& features, const std::vector<uint8_t>& down_mask) {
  if (features.rank() != 3 || features.dim(1) * features.dim(2) != down_mask.size()) {
    throw std::invalid_argument("features " + ShapeString(features.shape()) +
                                " do not match a mask of " + std::to_string(down_mask.size()) +
                                " cells");
  }
}

std::vector<double> MaskedValues(const Tensor& features, const std::vector<uint8_t>& mask) {
  const size_t n = features.dim(0), cells = mask.size();
  std::vector<double> out;
  for (size_t cell = 0; cell < cells; ++cell) {
    if (!mask[cell]) continue;
    for (size_t c = 0; c < n; ++c) out.push_back(features[c * cells + cell]);
  }
  return out;
}

void ScatterMasked(const std::vector<double>& values, const std::vector<uint8_t>& mask,
                   Tensor& features) {
  const size_t n = features.dim(0), cells = mask.size();
  size_t k = 0;
  for (size_t cell = 0; cell < cells; ++cell) {
    if (!mask[cell]) continue;
    for (size_t c = 0; c < n; ++c) features[c * cells + cell] = values[k++];
  }
}

}  // namespace

ConceptSegment EncodeConcept(const Tensor& features, const std::vector<uint8_t>& down_mask,
                             int level) {
  CheckGrid(features, down_mask);
  const QuantizerSpec spec = QuantizerSpec::ForLevel(level);
  ConceptSegment seg;
  seg.level = static_cast<uint8_t>(level);
  const std::vector<double> values = MaskedValues(features, down_mask);
  if (values.empty()) return seg;
  const HardQuantized q =
      QuantizeHard(Tensor({values.size()}, std::vector<double>(values)), spec);
  seg.table = HuffmanTable::Build(q.symbols);
  seg.payload = HuffmanEncode(q.symbols, seg.table);
  return seg;
}

DecodedConcept DecodeConcept(const ConceptSegment& segment,
                             const std::vector<uint8_t>& down_mask, size_t channels,
                             size_t h, size_t w) {
  if (down_mask.size() != h * w) throw std::invalid_argument("mask does not match grid");
  DecodedConcept out;
  out.features = Tensor({channels, h, w});
  size_t cells = 0;
  for (uint8_t b : down_mask) cells += b;
  const size_t count = cells * channels;
  if (count == 0) {
    out.corrupted = !segment.payload.empty();
    return out;
  }
  const QuantizerSpec spec = QuantizerSpec::ForLevel(segment.level);
  HuffmanDecoded d = HuffmanDecode(segment.payload, segment.table, count);
  out.corrupted = d.corrupted;
  std::vector<double> values(count);
  for (size_t i = 0; i < count; ++i) {
    if (d.symbols[i] >= spec.size()) {
      d.symbols[i] = 0;
      out.corrupted = true;
    }
    values[i] = spec.centers()[d.symbols[i]];
  }
  ScatterMasked(values, down_mask, out.features);
  return out;
}

Tensor QuantizeConceptFeatures(const Tensor& features, const std::vector<uint8_t>& down_mask,
                               int level) {
  CheckGrid(features, down_mask);
  const QuantizerSpec spec = QuantizerSpec::ForLevel(level);
  std::vector<double> values = MaskedValues(features, down_mask);
  const size_t count = values.size();
  const HardQuantized q = QuantizeHard(Tensor({count}, std::move(values)), spec);
  Tensor out(features.shape());
  ScatterMasked(q.values.values(), down_mask, out);
  return out;
}

SemanticBitstream EncodeScene(const Tensor& features, const LabelMap& labels,
                              const std::vector<int>& levels, size_t num_classes) {
  if (levels.size() != num_classes) {
    throw std::invalid_argument("need one level per concept");
  }
  if (features.rank() != 3 || labels.height() != features.dim(1) * kPatchSize ||
      labels.width() != features.dim(2) * kPatchSize) {
    throw std::invalid_argument("features " + ShapeString(features.shape()) +
                                " do not match label map");
  }
  SemanticBitstream s;
  s.num_classes = static_cast<uint16_t>(num_classes);
  s.channels = static_cast<uint16_t>(features.dim(0));
  s.height = static_cast<uint16_t>(features.dim(1));
  s.width = static_cast<uint16_t>(features.dim(2));
  s.num_levels = kNumLevels;
  const std::vector<SemanticMask> masks = ExtractAllMasks(labels, num_classes);
  for (size_t m = 0; m < num_classes; ++m) {
    s.concepts.push_back(EncodeConcept(features, masks[m].down, levels[m]));
  }
  s.label_runs = RunLengthEncode(labels);
  return s;
}

DecodedScene DecodeScene(const SemanticBitstream& stream) {
  DecodedScene out;
  const size_t h = stream.height, w = stream.width, n = stream.channels;
  SanitizedLabels sl = RunLengthDecodeSanitized(stream.label_runs, h * kPatchSize,
                                                w * kPatchSize, stream.num_classes);
  out.corrupted = sl.repaired;
  out.labels = std::move(sl.labels);
  out.down_labels = DownscaleLabels(out.labels);
  out.masks = ExtractAllMasks(out.labels, stream.num_classes);
  out.features = Tensor({n, h, w});
  for (size_t m = 0; m < stream.concepts.size(); ++m) {
    DecodedConcept d = DecodeConcept(stream.concepts[m], out.masks[m].down, n, h, w);
    out.corrupted = out.corrupted || d.corrupted;
    out.features = Add(out.features, d.features);
    out.concept_features.push_back(std::move(d.features));
  }
  return out;
}

}  // namespace semcodec
