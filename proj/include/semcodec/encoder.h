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

#ifndef SEMCODEC_ENCODER_H_
#define SEMCODEC_ENCODER_H_

#include <vector>

#include "semcodec/concepts.h"
#include "semcodec/graph.h"
#include "semcodec/param_block.h"
#include "semcodec/rng.h"

namespace semcodec {


struct EncoderConfig {
  size_t channels = 8;
  double leaky_slope = 0.2;
  // Per-channel output standard deviation after normalization.
  double feature_scale = 0.5;
  double norm_epsilon = 1e-5;
};

// Shared per-patch linear map: "enc.w" [192 x n], "enc.b" [1 x n].
ParamBlock MakeEncoderParams(const EncoderConfig& config, RngStream& rng);

// patches [cells x 192] -> leaky-relu activations [cells x n].
Var EncodeProjectionGraph(Graph& g, Var patches, const ParamRef& params,
                          const EncoderConfig& config);
// Projection followed by per-channel normalization over cells.
Var EncodeFeaturesGraph(Graph& g, Var patches, const ParamRef& params,
                        const EncoderConfig& config);

// [3 x H x W] -> [n x H/8 x W/8].
Tensor EncodeProjection(const Tensor& image, const ParamBlock& params,
                        const EncoderConfig& config);
Tensor EncodeFeatures(const Tensor& image, const ParamBlock& params,
                      const EncoderConfig& config);

// Classification head shared across concepts: "head.w" [n x M], "head.b".
ParamBlock MakeClassHeadParams(size_t channels, size_t num_classes, RngStream& rng);

// Sum over non-empty concepts of -log p_hat[m], where p_hat is the softmax
// of the head applied to the spatially max-pooled concept features.
// `features` is the full map [cells x n]; masks select each concept.
Var FeatureClassLossGraph(Graph& g, Var features, const std::vector<SemanticMask>& masks,
                          const ParamRef& head);
double FeatureClassLoss(const std::vector<SemanticConcept>& concepts, const ParamBlock& head);

// Predicted class distribution for one concept.
Tensor ClassifyConcept(const SemanticConcept& c, const ParamBlock& head);

}  // namespace semcodec

#endif  // SEMCODEC_ENCODER_H_
