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

#include "semcodec/decoder.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace semcodec {

namespace {

Tensor RandomMatrix(RngStream& rng, size_t rows, size_t cols, double stddev) {
  Tensor t = Tensor::Matrix(rows, cols);
  FillNormal(rng, stddev, t.data());
  return t;
}

std::string HeadName(const char* base, size_t m) { return std::string(base) + std::to_string(m); }

// Constant [2 x cols] selectors that broadcast attention column k.
Tensor ColumnSelector(size_t k, size_t cols) {
  Tensor t = Tensor::Matrix(2, cols);
  for (size_t j = 0; j < cols; ++j) t[k * cols + j] = 1.0;
  return t;
}

}  // namespace

ParamBlock MakeDecoderParams(const DecoderConfig& config, RngStream& rng) {
  const size_t n = config.channels, k = config.hidden, M = config.num_classes;
  const double in_std = 1.0 / std::sqrt(static_cast<double>(n));
  const double hid_std = 0.1 / std::sqrt(static_cast<double>(k));
  ParamBlock p;
  p.Add("loc.w1", RandomMatrix(rng, n, k, in_std));
  p.Add("loc.b1", Tensor::Matrix(1, k));
  for (size_t m = 1; m <= M; ++m) {
    p.Add(HeadName("loc.w2.", m), RandomMatrix(rng, k, kPatchDim, hid_std));
    p.Add(HeadName("loc.b2.", m), Tensor::Matrix(1, kPatchDim));
  }
  p.Add("glob.w1", RandomMatrix(rng, n, k, in_std));
  p.Add("glob.b1", Tensor::Matrix(1, k));
  p.Add("glob.gamma", Tensor::Matrix(M, k, 1.0));
  p.Add("glob.beta", Tensor::Matrix(M, k));
  p.Add("glob.w2", RandomMatrix(rng, k, kPatchDim, hid_std));
  p.Add("glob.b2", Tensor::Matrix(1, kPatchDim));
  p.Add("att.w", RandomMatrix(rng, n, 2, 0.1 * in_std));
  p.Add("att.b", Tensor::Matrix(1, 2));
  return p;
}

Var LocalGenerateGraph(Graph& g, Var cells, const LabelMap& down_labels, const ParamRef& params,
                       const DecoderConfig& config) {
  const size_t num_cells = g.value(cells).rows();
  if (down_labels.size() != num_cells) throw std::invalid_argument("label grid size mismatch");
  Var trunk = g.LeakyRelu(g.AddRow(g.MatMul(cells, params(g, "loc.w1")), params(g, "loc.b1")),
                          config.leaky_slope);
  Var out = g.Constant(Tensor::Matrix(num_cells, kPatchDim));
  for (size_t m = 1; m <= config.num_classes; ++m) {
    std::vector<uint8_t> rows(num_cells);
    bool any = false;
    for (size_t i = 0; i < num_cells; ++i) {
      rows[i] = down_labels[i] == static_cast<int>(m);
      any = any || rows[i];
    }
    if (!any) continue;
    Var y = g.AddRow(g.MatMul(trunk, params(g, HeadName("loc.w2.", m))),
                     params(g, HeadName("loc.b2.", m)));
    out = g.Add(out, g.Mul(y, g.Constant(CellRowMask(rows, kPatchDim))));
  }
  return out;
}

Var GlobalGenerateGraph(Graph& g, Var cells, const LabelMap& down_labels,
                        const ParamRef& params, const DecoderConfig& config, bool modulate) {
  Var hidden = g.LeakyRelu(
      g.AddRow(g.MatMul(cells, params(g, "glob.w1")), params(g, "glob.b1")), config.leaky_slope);
  if (modulate) {
    Var onehot = g.Constant(OneHotCells(down_labels, config.num_classes));
    hidden = g.Add(g.Mul(hidden, g.MatMul(onehot, params(g, "glob.gamma"))),
                   g.MatMul(onehot, params(g, "glob.beta")));
  }
  return g.AddRow(g.MatMul(hidden, params(g, "glob.w2")), params(g, "glob.b2"));
}

Var AttentionGraph(Graph& g, Var cells, const ParamRef& params) {
  return g.Softmax(g.AddRow(g.MatMul(cells, params(g, "att.w")), params(g, "att.b")));
}

DecoderVars DecodeGraph(Graph& g, Var cells, const LabelMap& down_labels, const ParamRef& params,
                        const DecoderConfig& config) {
  if (g.value(cells).cols() != config.channels) {
    throw std::invalid_argument("decoder expects " + std::to_string(config.channels) +
                                " channels, got " + std::to_string(g.value(cells).cols()));
  }
  DecoderVars v;
  v.local = LocalGenerateGraph(g, cells, down_labels, params, config);
  v.global = GlobalGenerateGraph(g, cells, down_labels, params, config);
  v.attention = AttentionGraph(g, cells, params);
  Var wl = g.MatMul(v.attention, g.Constant(ColumnSelector(0, kPatchDim)));
  Var wg = g.MatMul(v.attention, g.Constant(ColumnSelector(1, kPatchDim)));
  v.fused = g.Add(g.Mul(wl, v.local), g.Mul(wg, v.global));
  return v;
}

Reconstruction Decode(const Tensor& features, const LabelMap& down_labels,
                      const ParamBlock& params, const DecoderConfig& config) {
  if (features.rank() != 3) throw std::invalid_argument("decoder expects [n x h x w] features");
  const size_t h = features.dim(1), w = features.dim(2);
  const size_t H = h * kPatchSize, W = w * kPatchSize;
  Graph g;
  const DecoderVars v =
      DecodeGraph(g, g.Constant(FeaturesToCells(features)), down_labels, ParamRef(params), config);
  Reconstruction r;
  r.local = PatchesToImage(g.value(v.local), H, W);
  r.global = PatchesToImage(g.value(v.global), H, W);
  r.weight_local = Tensor({H, W});
  r.weight_global = Tensor({H, W});
  const Tensor& a = g.value(v.attention);
  for (size_t y = 0; y < H; ++y) {
    for (size_t x = 0; x < W; ++x) {
      const size_t cell = (y / kPatchSize) * w + x / kPatchSize;
      r.weight_local[y * W + x] = a[2 * cell];
      r.weight_global[y * W + x] = a[2 * cell + 1];
    }
  }
  r.fused = PatchesToImage(g.value(v.fused), H, W);
  r.image = r.fused;
  for (double& x : r.image.values()) x = std::clamp(x, 0.0, 1.0);
  return r;
}

Tensor AttentionFuse(const Tensor& local, const Tensor& global, const Tensor& weight_local,
                     const Tensor& weight_global) {
  if (local.shape() != global.shape() || local.rank() != 3) {
    throw std::invalid_argument("fusion operands differ: " + ShapeString(local.shape()) +
                                " vs " + ShapeString(global.shape()));
  }
  const size_t C = local.dim(0), P = local.dim(1) * local.dim(2);
  if (weight_local.size() != P || weight_global.size() != P) {
    throw std::invalid_argument("attention weights do not match the image grid");
  }
  for (size_t p = 0; p < P; ++p) {
    const double a = weight_local[p], b = weight_global[p];
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0) || std::abs(a + b - 1.0) > 1e-9) {
      throw std::invalid_argument("attention weights at pixel " + std::to_string(p) +
                                  " are not a partition of one");
    }
  }
  Tensor out(local.shape());
  for (size_t c = 0; c < C; ++c)
    for (size_t p = 0; p < P; ++p)
      out[c * P + p] = weight_local[p] * local[c * P + p] + weight_global[p] * global[c * P + p];
  return out;
}

Var PatchesToPixelsGraph(Graph& g, Var patches, size_t height, size_t width) {
  Var rows = g.Reshape(patches, {height * width, 3});
  return g.Apply(BlocksToRaster(height, width, kPatchSize), rows);
}

DiscriminatorLayout MakeDiscriminatorLayout(size_t height, size_t width, size_t num_classes) {
  DiscriminatorLayout l;
  l.height = height;
  l.width = width;
  l.num_classes = num_classes;
  l.patch0 = kPatchSize;
  l.to_blocks0 = RasterToBlocks(height, width, l.patch0);
  l.pool = AveragePool2x2(height, width);
  const size_t h1 = height / 2, w1 = width / 2;
  l.patch1 = (h1 % kPatchSize == 0 && w1 % kPatchSize == 0) ? kPatchSize : kPatchSize / 2;
  l.to_blocks1 = RasterToBlocks(h1, w1, l.patch1);
  return l;
}

ParamBlock MakeDiscriminatorParams(const DiscriminatorLayout& layout, RngStream& rng) {
  const size_t d0 = layout.patch0 * layout.patch0 * layout.input_channels();
  const size_t d1 = layout.patch1 * layout.patch1 * layout.input_channels();
  ParamBlock p;
  p.Add("disc.w0", RandomMatrix(rng, d0, 1, 1.0 / std::sqrt(static_cast<double>(d0))));
  p.Add("disc.b0", Tensor::Matrix(1, 1));
  p.Add("disc.w1", RandomMatrix(rng, d1, 1, 1.0 / std::sqrt(static_cast<double>(d1))));
  p.Add("disc.b1", Tensor::Matrix(1, 1));
  return p;
}

Var DiscriminatorGraph(Graph& g, Var pixels, const Tensor& label_onehot,
                       const ParamRef& params, const DiscriminatorLayout& layout) {
  const size_t P = layout.height * layout.width;
  const size_t C = layout.input_channels();
  if (g.value(pixels).rows() != P || label_onehot.rows() != P ||
      label_onehot.cols() != layout.num_classes) {
    throw std::invalid_argument("discriminator input does not match its layout");
  }
  const Var parts[] = {pixels, g.Constant(label_onehot)};
  Var in = g.ConcatCols(parts);
  const size_t d0 = layout.patch0 * layout.patch0 * C;
  Var p0 = g.Reshape(g.Apply(layout.to_blocks0, in), {P / (layout.patch0 * layout.patch0), d0});
  Var s0 = g.Add(g.Mean(g.MatMul(p0, params(g, "disc.w0"))), params(g, "disc.b0"));
  const size_t P1 = P / 4;
  const size_t d1 = layout.patch1 * layout.patch1 * C;
  Var pooled = g.Apply(layout.pool, in);
  Var p1 = g.Reshape(g.Apply(layout.to_blocks1, pooled), {P1 / (layout.patch1 * layout.patch1), d1});
  Var s1 = g.Add(g.Mean(g.MatMul(p1, params(g, "disc.w1"))), params(g, "disc.b1"));
  return g.Scale(g.Add(s0, s1), 0.5);
}

double DiscriminatorScore(const Tensor& image, const LabelMap& labels,
                          const ParamBlock& params, const DiscriminatorLayout& layout) {
  Graph g;
  Var d = DiscriminatorGraph(g, g.Constant(ImageToPixels(image)),
                             OneHotCells(labels, layout.num_classes), ParamRef(params), layout);
  return g.scalar(d);
}

HingeLosses ComputeHingeLosses(std::span<const double> real, std::span<const double> fake) {
  if (real.empty() || fake.empty()) throw std::invalid_argument("hinge loss of no scores");
  double lr = 0.0, lf = 0.0, g = 0.0;
  for (double r : real) lr += std::max(0.0, 1.0 - r);
  for (double f : fake) {
    lf += std::max(0.0, 1.0 + f);
    g -= f;
  }
  const double nr = static_cast<double>(real.size()), nf = static_cast<double>(fake.size());
  return {lr / nr + lf / nf, g / nf};
}

Var HingeDiscriminatorGraph(Graph& g, std::span<const Var> real, std::span<const Var> fake) {
  if (real.empty() || fake.empty()) throw std::invalid_argument("hinge loss of no scores");
  Var lr = g.Constant(Tensor::Matrix(1, 1));
  for (Var r : real) lr = g.Add(lr, g.Relu(g.AddScalar(g.Scale(r, -1.0), 1.0)));
  Var lf = g.Constant(Tensor::Matrix(1, 1));
  for (Var f : fake) lf = g.Add(lf, g.Relu(g.AddScalar(f, 1.0)));
  return g.Add(g.Scale(lr, 1.0 / static_cast<double>(real.size())),
               g.Scale(lf, 1.0 / static_cast<double>(fake.size())));
}

double JointGeneratorLoss(double adversarial, double perceptual, double classification,
                          double lambda1, double lambda2) {
  return adversarial + lambda1 * perceptual + lambda2 * classification;
}

}  // namespace semcodec
