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

#ifndef SEMCODEC_PERCEPTUAL_H_
#define SEMCODEC_PERCEPTUAL_H_

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "semcodec/graph.h"
#include "semcodec/sparse.h"
#include "semcodec/tensor.h"

namespace semcodec {

// Frozen multi-scale feature map standing in for a pretrained perceptual
// network. At each scale the image is described by five channels (RGB and
// the absolute horizontal/vertical forward differences of the gray level,
// zero on the last column/row), projected by a fixed seeded 5x8 matrix plus
// bias and passed through a leaky-relu. Scales are full, 1/2 and 1/4
// resolution; each coarser image is the 2x2 average pool of the previous.
class PerceptualExtractor {
 public:
  static constexpr int kScales = 3;
  static constexpr size_t kInputChannels = 5;
  static constexpr size_t kFeatureChannels = 8;
  static constexpr double kSlope = 0.2;

  // Height and width must be divisible by 4.
  PerceptualExtractor(size_t height, size_t width, uint64_t seed = 0xFE47);

  size_t height() const { return height_; }
  size_t width() const { return width_; }
  uint64_t seed() const { return seed_; }
  const Tensor& projection(int scale) const { return scales_[scale].projection; }
  const Tensor& bias(int scale) const { return scales_[scale].bias; }

  // Per scale [pixels_s x 8] from an image [3 x H x W].
  std::vector<Tensor> Features(const Tensor& image) const;
  // Same from raster pixels [H*W x 3] inside a graph.
  std::vector<Var> FeaturesGraph(Graph& g, Var pixels) const;

  // Sum over scales of the mean squared feature difference.
  double Loss(const Tensor& a, const Tensor& b) const;
  double LossFromFeatures(const std::vector<Tensor>& fa, const std::vector<Tensor>& fb) const;
  Var LossGraph(Graph& g, Var pixels, const std::vector<Tensor>& target) const;

  // Per-channel spatial means of every scale, concatenated (24 values);
  // the per-image descriptor for distribution distances.
  std::vector<double> Descriptor(const Tensor& image) const;

 private:
  struct Scale {
    size_t height = 0, width = 0;
    std::shared_ptr<const SparseMatrix> pool;  // from the previous scale
    std::shared_ptr<const SparseMatrix> dh, dv;
    Tensor projection;  // [5 x 8]
    Tensor bias;        // [1 x 8]
  };

  size_t height_, width_;
  uint64_t seed_;
  std::array<Scale, kScales> scales_;
};

}  // namespace semcodec

#endif  // SEMCODEC_PERCEPTUAL_H_
