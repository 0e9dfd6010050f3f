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

#ifndef SEMCODEC_DECODER_H_
#define SEMCODEC_DECODER_H_

#include <memory>
#include <span>
#include <vector>

#include "semcodec/concepts.h"
#include "semcodec/graph.h"
#include "semcodec/param_block.h"
#include "semcodec/rng.h"
#include "semcodec/sparse.h"

namespace semcodec {

struct DecoderConfig {
  size_t channels = 8;
  size_t num_classes = 8;
  size_t hidden = 32;
  double leaky_slope = 0.2;
};

// Local generator: shared trunk "loc.w1" [n x k], "loc.b1" and one head
// "loc.w2.<m>" [k x 192], "loc.b2.<m>" per class m = 1..M.
// Global generator: "glob.w1" [n x k], "glob.b1", per-class modulation
// "glob.gamma"/"glob.beta" [M x k] (initialized to 1 and 0), output
// "glob.w2" [k x 192], "glob.b2".
// Attention: "att.w" [n x 2], "att.b" [1 x 2].
ParamBlock MakeDecoderParams(const DecoderConfig& config, RngStream& rng);

// Decoder activations in patch space: [cells x 192], rows ordered as in
// ImageToPatches. `attention` is [cells x 2] with columns (W_l, W_g).
struct DecoderVars {
  Var local;
  Var global;
  Var attention;
  Var fused;
};

// `cells` holds the (quantized) features [cells x n]; `down_labels` is the
// h x w class grid that selects local heads and global modulation.
DecoderVars DecodeGraph(Graph& g, Var cells, const LabelMap& down_labels, const ParamRef& params,
                        const DecoderConfig& config);

// Sum over classes of head m applied to the cells of class m.
Var LocalGenerateGraph(Graph& g, Var cells, const LabelMap& down_labels, const ParamRef& params,
                       const DecoderConfig& config);
// With `modulate` false the per-class scale/shift is skipped.
Var GlobalGenerateGraph(Graph& g, Var cells, const LabelMap& down_labels,
                        const ParamRef& params, const DecoderConfig& config,
                        bool modulate = true);
Var AttentionGraph(Graph& g, Var cells, const ParamRef& params);

struct Reconstruction {
  Tensor local;     // [3 x H x W]
  Tensor global;    // [3 x H x W]
  Tensor weight_local;   // [H x W]
  Tensor weight_global;  // [H x W]
  Tensor fused;     // [3 x H x W], unclamped
  Tensor image;     // fused clamped to [0, 1]
};

// Features [n x h x w] -> images at 8x resolution.
Reconstruction Decode(const Tensor& features, const LabelMap& down_labels,
                      const ParamBlock& params, const DecoderConfig& config);

// x = W_l * x_l + W_g * x_g with weights broadcast over channels. Throws when
// the weights leave [0, 1] or do not sum to one within 1e-9.
Tensor AttentionFuse(const Tensor& local, const Tensor& global, const Tensor& weight_local,
                     const Tensor& weight_global);

// Linear patch discriminator D(x, s) on the image concatenated with the
// one-hot label map, at full and half resolution. Each scale scores every
// non-overlapping patch; D is the mean of the two scales' mean scores.
struct DiscriminatorLayout {
  size_t height = 0, width = 0, num_classes = 0;
  size_t patch0 = 8, patch1 = 8;
  std::shared_ptr<const SparseMatrix> to_blocks0, pool, to_blocks1;

  size_t input_channels() const { return 3 + num_classes; }
};

DiscriminatorLayout MakeDiscriminatorLayout(size_t height, size_t width, size_t num_classes);

// "disc.w0" [patch0^2 (3+M) x 1], "disc.b0", "disc.w1", "disc.b1".
ParamBlock MakeDiscriminatorParams(const DiscriminatorLayout& layout, RngStream& rng);

// `pixels` [H*W x 3] raster; `label_onehot` [H*W x M]. Returns [1 x 1].
Var DiscriminatorGraph(Graph& g, Var pixels, const Tensor& label_onehot,
                       const ParamRef& params, const DiscriminatorLayout& layout);
double DiscriminatorScore(const Tensor& image, const LabelMap& labels,
                          const ParamBlock& params, const DiscriminatorLayout& layout);

struct HingeLosses {
  double discriminator;  // E[max(0, 1 - D(x,s))] + E[max(0, 1 + D(x_hat,s))]
  double generator;      // -E[D(x_hat,s)]
};
HingeLosses ComputeHingeLosses(std::span<const double> real, std::span<const double> fake);
Var HingeDiscriminatorGraph(Graph& g, std::span<const Var> real, std::span<const Var> fake);

// -E[D(x_hat,s)] + lambda1 * L_P + lambda2 * L_C.
double JointGeneratorLoss(double adversarial, double perceptual, double classification,
                          double lambda1, double lambda2);

// Patch rows [cells x 192] <-> raster pixels [H*W x 3] inside a graph.
Var PatchesToPixelsGraph(Graph& g, Var patches, size_t height, size_t width);

}  // namespace semcodec

#endif  // SEMCODEC_DECODER_H_
