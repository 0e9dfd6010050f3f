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

#include "semcodec/encoder.h"

#include <cmath>
#include <stdexcept>

namespace semcodec {

ParamBlock MakeEncoderParams(const EncoderConfig& config, RngStream& rng) {
  ParamBlock p;
  Tensor w = Tensor::Matrix(kPatchDim, config.channels);
  FillNormal(rng, 1.0 / std::sqrt(static_cast<double>(kPatchDim)), w.data());
  p.Add("enc.w", std::move(w));
  p.Add("enc.b", Tensor::Matrix(1, config.channels));
  return p;
}

Var EncodeProjectionGraph(Graph& g, Var patches, const ParamRef& params,
                          const EncoderConfig& config) {
  Var a = g.AddRow(g.MatMul(patches, params(g, "enc.w")), params(g, "enc.b"));
  return g.LeakyRelu(a, config.leaky_slope);
}

Var EncodeFeaturesGraph(Graph& g, Var patches, const ParamRef& params,
                        const EncoderConfig& config) {
  Var a = EncodeProjectionGraph(g, patches, params, config);
  const size_t cells = g.value(a).rows();
  Var centered = g.Sub(a, g.BroadcastRows(g.ColMean(a), cells));
  Var var = g.ColMean(g.Square(centered));
  // scale / sqrt(var + eps), built from exp/log so it stays in the op set.
  Var inv_sd = g.Elementwise(ElementwiseKind::kExp,
                             g.Scale(g.Log(g.AddScalar(var, config.norm_epsilon)), -0.5));
  Var normalized = g.Mul(centered, g.BroadcastRows(inv_sd, cells));
  return g.Scale(normalized, config.feature_scale);
}

namespace {

void CheckImage(const Tensor& image) {
  if (image.rank() != 3 || image.dim(0) != 3 || image.dim(1) % kPatchSize ||
      image.dim(2) % kPatchSize) {
    throw std::invalid_argument("encoder expects [3 x H x W] with H, W divisible by 8; got " +
                                ShapeString(image.shape()));
  }
}

}  // namespace

Tensor EncodeProjection(const Tensor& image, const ParamBlock& params,
                        const EncoderConfig& config) {
  CheckImage(image);
  Graph g;
  Var out = EncodeProjectionGraph(g, g.Constant(ImageToPatches(image)), params, config);
  return CellsToFeatures(g.value(out), image.dim(1) / kPatchSize, image.dim(2) / kPatchSize);
}

Tensor EncodeFeatures(const Tensor& image, const ParamBlock& params,
                      const EncoderConfig& config) {
  CheckImage(image);
  Graph g;
  Var out = EncodeFeaturesGraph(g, g.Constant(ImageToPatches(image)), params, config);
  return CellsToFeatures(g.value(out), image.dim(1) / kPatchSize, image.dim(2) / kPatchSize);
}

ParamBlock MakeClassHeadParams(size_t channels, size_t num_classes, RngStream& rng) {
  ParamBlock p;
  Tensor w = Tensor::Matrix(channels, num_classes);
  FillNormal(rng, 1.0 / std::sqrt(static_cast<double>(channels)), w.data());
  p.Add("head.w", std::move(w));
  p.Add("head.b", Tensor::Matrix(1, num_classes));
  return p;
}

Var FeatureClassLossGraph(Graph& g, Var features, const std::vector<SemanticMask>& masks,
                          const ParamRef& head) {
  const size_t n = g.value(features).cols();
  Var w = head(g, "head.w");
  Var b = head(g, "head.b");
  Var total = g.Constant(Tensor::Matrix(1, 1));
  for (const SemanticMask& mask : masks) {
    if (mask.empty()) continue;
    Var masked = g.Mul(features, g.Constant(CellRowMask(mask.down, n)));
    Var logits = g.Add(g.MatMul(g.ColMax(masked), w), b);
    Var logp = g.LogSoftmax(logits);
    total = g.Sub(total, g.Element(logp, static_cast<size_t>(mask.class_id - 1)));
  }
  return total;
}

double FeatureClassLoss(const std::vector<SemanticConcept>& concepts, const ParamBlock& head) {
  double total = 0.0;
  for (const SemanticConcept& c : concepts) {
    if (c.mask.empty()) continue;
    const Tensor p = ClassifyConcept(c, head);
    total -= std::log(p[static_cast<size_t>(c.class_id - 1)]);
  }
  return total;
}

Tensor ClassifyConcept(const SemanticConcept& c, const ParamBlock& head) {
  Graph g;
  Var f = g.Constant(FeaturesToCells(c.features));
  Var logits = g.Add(g.MatMul(g.ColMax(f), g.Constant(head.value("head.w"))),
                     g.Constant(head.value("head.b")));
  return g.value(g.Softmax(logits)).Reshaped({g.value(logits).size()});
}

}  // namespace semcodec
