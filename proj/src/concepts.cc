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

#include "semcodec/concepts.h"

#include <numeric>
#include <stdexcept>

namespace semcodec {

LabelMap DownscaleLabels(const LabelMap& labels) {
  const size_t h = labels.height() / kPatchSize, w = labels.width() / kPatchSize;
  LabelMap down(h, w, 1);
  std::vector<int> count(kMaxClasses + 2);
  for (size_t u = 0; u < h; ++u) {
    for (size_t v = 0; v < w; ++v) {
      std::fill(count.begin(), count.end(), 0);
      int max_label = 0;
      for (size_t dy = 0; dy < kPatchSize; ++dy) {
        for (size_t dx = 0; dx < kPatchSize; ++dx) {
          const int c = labels.at(u * kPatchSize + dy, v * kPatchSize + dx);
          if (c < 1 || c > static_cast<int>(kMaxClasses)) {
            throw std::invalid_argument("label out of range: " + std::to_string(c));
          }
          ++count[c];
          max_label = std::max(max_label, c);
        }
      }
      int best = 1;
      for (int c = 1; c <= max_label; ++c)
        if (count[c] > count[best]) best = c;
      down.at(u, v) = best;
    }
  }
  return down;
}

size_t SemanticMask::DownCount() const {
  return std::accumulate(down.begin(), down.end(), size_t{0});
}
size_t SemanticMask::FullCount() const {
  return std::accumulate(full.begin(), full.end(), size_t{0});
}

namespace {

SemanticMask MaskFrom(const LabelMap& labels, const LabelMap& down, int class_id) {
  SemanticMask mask;
  mask.class_id = class_id;
  mask.height = labels.height();
  mask.width = labels.width();
  mask.full.resize(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) mask.full[i] = labels[i] == class_id;
  mask.down.resize(down.size());
  for (size_t i = 0; i < down.size(); ++i) mask.down[i] = down[i] == class_id;
  return mask;
}

}  // namespace

SemanticMask ExtractMask(const LabelMap& labels, int class_id) {
  return MaskFrom(labels, DownscaleLabels(labels), class_id);
}

std::vector<SemanticMask> ExtractAllMasks(const LabelMap& labels, size_t num_classes) {
  const LabelMap down = DownscaleLabels(labels);
  std::vector<SemanticMask> masks;
  masks.reserve(num_classes);
  for (size_t m = 1; m <= num_classes; ++m)
    masks.push_back(MaskFrom(labels, down, static_cast<int>(m)));
  return masks;
}

SemanticConcept DecomposeFeatures(const Tensor& features, const SemanticMask& mask) {
  if (features.rank() != 3 || features.dim(1) != mask.down_height() ||
      features.dim(2) != mask.down_width()) {
    throw std::invalid_argument("feature map " + ShapeString(features.shape()) +
                                " does not match mask grid");
  }
  SemanticConcept c{mask.class_id, features, mask};
  const size_t cells = mask.down.size();
  for (size_t k = 0; k < features.dim(0); ++k)
    for (size_t i = 0; i < cells; ++i)
      if (!mask.down[i]) c.features[k * cells + i] = 0.0;
  return c;
}

std::vector<SemanticConcept> DecomposeAll(const Tensor& features,
                                          const std::vector<SemanticMask>& masks) {
  std::vector<SemanticConcept> out;
  out.reserve(masks.size());
  Tensor total(features.shape());
  for (const SemanticMask& m : masks) {
    out.push_back(DecomposeFeatures(features, m));
    for (size_t i = 0; i < total.size(); ++i) total[i] += out.back().features[i];
  }
  if (!(total == features)) {
    throw std::logic_error("downscaled masks do not partition the feature grid");
  }
  return out;
}

Tensor FeaturesToCells(const Tensor& features) {
  const size_t n = features.dim(0), cells = features.dim(1) * features.dim(2);
  Tensor out = Tensor::Matrix(cells, n);
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < cells; ++i) out[i * n + k] = features[k * cells + i];
  return out;
}

Tensor CellsToFeatures(const Tensor& cells, size_t h, size_t w) {
  const size_t n = cells.cols();
  if (cells.rows() != h * w) throw std::invalid_argument("cell count mismatch");
  Tensor out({n, h, w});
  for (size_t i = 0; i < h * w; ++i)
    for (size_t k = 0; k < n; ++k) out[k * h * w + i] = cells[i * n + k];
  return out;
}

Tensor ImageToPixels(const Tensor& image) {
  const size_t H = image.dim(1), W = image.dim(2);
  Tensor out = Tensor::Matrix(H * W, 3);
  for (size_t c = 0; c < 3; ++c)
    for (size_t p = 0; p < H * W; ++p) out[p * 3 + c] = image[c * H * W + p];
  return out;
}

Tensor PixelsToImage(const Tensor& pixels, size_t height, size_t width) {
  Tensor out({3, height, width});
  for (size_t c = 0; c < 3; ++c)
    for (size_t p = 0; p < height * width; ++p) out[c * height * width + p] = pixels[p * 3 + c];
  return out;
}

Tensor ImageToPatches(const Tensor& image) {
  const size_t H = image.dim(1), W = image.dim(2);
  const size_t h = H / kPatchSize, w = W / kPatchSize;
  constexpr size_t kDim = kPatchSize * kPatchSize * 3;
  Tensor out = Tensor::Matrix(h * w, kDim);
  for (size_t u = 0; u < h; ++u)
    for (size_t v = 0; v < w; ++v)
      for (size_t dy = 0; dy < kPatchSize; ++dy)
        for (size_t dx = 0; dx < kPatchSize; ++dx)
          for (size_t c = 0; c < 3; ++c)
            out[(u * w + v) * kDim + (dy * kPatchSize + dx) * 3 + c] =
                image.at(c, u * kPatchSize + dy, v * kPatchSize + dx);
  return out;
}

Tensor PatchesToImage(const Tensor& patches, size_t height, size_t width) {
  const size_t h = height / kPatchSize, w = width / kPatchSize;
  constexpr size_t kDim = kPatchSize * kPatchSize * 3;
  if (patches.rows() != h * w || patches.cols() != kDim) {
    throw std::invalid_argument("patch matrix " + ShapeString(patches.shape()) +
                                " does not fit image size");
  }
  Tensor out({3, height, width});
  for (size_t u = 0; u < h; ++u)
    for (size_t v = 0; v < w; ++v)
      for (size_t dy = 0; dy < kPatchSize; ++dy)
        for (size_t dx = 0; dx < kPatchSize; ++dx)
          for (size_t c = 0; c < 3; ++c)
            out.at(c, u * kPatchSize + dy, v * kPatchSize + dx) =
                patches[(u * w + v) * kDim + (dy * kPatchSize + dx) * 3 + c];
  return out;
}

Tensor CellRowMask(const std::vector<uint8_t>& down, size_t cols) {
  Tensor out = Tensor::Matrix(down.size(), cols);
  for (size_t i = 0; i < down.size(); ++i)
    if (down[i])
      for (size_t j = 0; j < cols; ++j) out[i * cols + j] = 1.0;
  return out;
}

Tensor OneHotCells(const LabelMap& down, size_t num_classes) {
  Tensor out = Tensor::Matrix(down.size(), num_classes);
  for (size_t i = 0; i < down.size(); ++i) out[i * num_classes + (down[i] - 1)] = 1.0;
  return out;
}

}  // namespace semcodec
