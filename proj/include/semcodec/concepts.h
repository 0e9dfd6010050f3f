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

#ifndef SEMCODEC_CONCEPTS_H_
#define SEMCODEC_CONCEPTS_H_

#include <cstdint>
#include <vector>

#include "semcodec/scene.h"
#include "semcodec/tensor.h"

namespace semcodec {

// Values in one RGB patch.
inline constexpr size_t kPatchDim = kPatchSize * kPatchSize * 3;

// Per-cell class assignment: each 8x8 block goes to the class with the most
// pixels in it, ties to the lowest id. The result is h x w.
LabelMap DownscaleLabels(const LabelMap& labels);

struct SemanticMask {
  int class_id = 0;
  size_t height = 0, width = 0;  // full resolution
  std::vector<uint8_t> full;     // H*W
  std::vector<uint8_t> down;     // (H/8)*(W/8)

  size_t down_height() const { return height / kPatchSize; }
  size_t down_width() const { return width / kPatchSize; }
  size_t DownCount() const;
  size_t FullCount() const;
  bool empty() const { return DownCount() == 0; }
};

SemanticMask ExtractMask(const LabelMap& labels, int class_id);
std::vector<SemanticMask> ExtractAllMasks(const LabelMap& labels, size_t num_classes);

// Features of one class, zero wherever the downscaled mask is zero.
struct SemanticConcept {
  int class_id = 0;
  Tensor features;  // [n x h x w]
  SemanticMask mask;
};

SemanticConcept DecomposeFeatures(const Tensor& features, const SemanticMask& mask);

// Decomposes `features` into all M concepts and checks that the concepts sum
// back to the input (the downscaled masks partition the grid).
std::vector<SemanticConcept> DecomposeAll(const Tensor& features,
                                          const std::vector<SemanticMask>& masks);

// [n x h x w] <-> [(h*w) x n], cell index u*w + v.
Tensor FeaturesToCells(const Tensor& features);
Tensor CellsToFeatures(const Tensor& cells, size_t h, size_t w);

// [3 x H x W] <-> [(H*W) x 3] raster rows.
Tensor ImageToPixels(const Tensor& image);
Tensor PixelsToImage(const Tensor& pixels, size_t height, size_t width);

// [3 x H x W] <-> [cells x 192]; a patch row is ordered (dy, dx, channel).
Tensor ImageToPatches(const Tensor& image);
Tensor PatchesToImage(const Tensor& patches, size_t height, size_t width);

// Row mask [cells x cols] that is 1 on the rows of cells where `down` is set.
Tensor CellRowMask(const std::vector<uint8_t>& down, size_t cols);

// One-hot [(h*w) x M] of a downscaled label grid.
Tensor OneHotCells(const LabelMap& down, size_t num_classes);

}  // namespace semcodec

#endif  // SEMCODEC_CONCEPTS_H_
