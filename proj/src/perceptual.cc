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

#include "semcodec/perceptual.h"

#include <cmath>
#include <stdexcept>

#include "semcodec/concepts.h"
#include "semcodec/rng.h"

namespace semcodec {

namespace {

// Forward difference along x (horizontal) or y; zero on the far border.
std::shared_ptr<const SparseMatrix> DiffOp(size_t h, size_t w, bool horizontal) {
  auto op = std::make_shared<SparseMatrix>(h * w, h * w);
  for (size_t y = 0; y < h; ++y) {
    for (size_t x = 0; x < w; ++x) {
      const size_t p = y * w + x;
      if (horizontal && x + 1 < w) {
        op->Push(p, -1.0);
        op->Push(p + 1, 1.0);
      } else if (!horizontal && y + 1 < h) {
        op->Push(p, -1.0);
        op->Push(p + w, 1.0);
      }
      op->EndRow();
    }
  }
  return op;
}

Tensor GrayOf(const Tensor& pixels) {
  Tensor g = Tensor::Matrix(pixels.rows(), 1);
  for (size_t p = 0; p < pixels.rows(); ++p)
    g[p] = (pixels[3 * p] + pixels[3 * p + 1] + pixels[3 * p + 2]) / 3.0;
  return g;
}

const Tensor& GrayWeights() {
  static const Tensor kW = Tensor::FromRows({{1.0 / 3}, {1.0 / 3}, {1.0 / 3}});
  return kW;
}

}  // namespace

PerceptualExtractor::PerceptualExtractor(size_t height, size_t width, uint64_t seed)
    : height_(height), width_(width), seed_(seed) {
  if (height % 4 || width % 4 || height == 0 || width == 0) {
    throw std::invalid_argument("perceptual extractor needs sizes divisible by 4");
  }
  RngStream rng(seed, 0x9E7);
  size_t h = height, w = width;
  for (int s = 0; s < kScales; ++s) {
    Scale& sc = scales_[s];
    if (s > 0) {
      sc.pool = AveragePool2x2(h, w);
      h /= 2;
      w /= 2;
    }
    sc.height = h;
    sc.width = w;
    sc.dh = DiffOp(h, w, true);
    sc.dv = DiffOp(h, w, false);
    sc.projection = Tensor::Matrix(kInputChannels, kFeatureChannels);
    FillNormal(rng, 1.0 / std::sqrt(static_cast<double>(kInputChannels)),
               sc.projection.data());
    sc.bias = Tensor::Matrix(1, kFeatureChannels);
    FillNormal(rng, 0.1, sc.bias.data());
  }
}

std::vector<Tensor> PerceptualExtractor::Features(const Tensor& image) const {
  if (image.rank() != 3 || image.dim(0) != 3 || image.dim(1) != height_ ||
      image.dim(2) != width_) {
    throw std::invalid_argument("perceptual extractor built for 3x" + std::to_string(height_) +
                                "x" + std::to_string(width_) + ", got " +
                                ShapeString(image.shape()));
  }
  std::vector<Tensor> out;
  Tensor pixels = ImageToPixels(image);
  for (int s = 0; s < kScales; ++s) {
    const Scale& sc = scales_[s];
    if (s > 0) pixels = sc.pool->Apply(pixels);
    const Tensor gray = GrayOf(pixels);
    const Tensor gh = sc.dh->Apply(gray), gv = sc.dv->Apply(gray);
    const size_t P = pixels.rows();
    Tensor in = Tensor::Matrix(P, kInputChannels);
    for (size_t p = 0; p < P; ++p) {
      for (size_t c = 0; c < 3; ++c) in[p * kInputChannels + c] = pixels[p * 3 + c];
      in[p * kInputChannels + 3] = std::abs(gh[p]);
      in[p * kInputChannels + 4] = std::abs(gv[p]);
    }
    Tensor f = MatMul(in, sc.projection);
    for (size_t p = 0; p < P; ++p)
      for (size_t c = 0; c < kFeatureChannels; ++c) f[p * kFeatureChannels + c] += sc.bias[c];
    out.push_back(LeakyRelu(f, kSlope));
  }
  return out;
}

std::vector<Var> PerceptualExtractor::FeaturesGraph(Graph& g, Var pixels) const {
  std::vector<Var> out;
  Var cur = pixels;
  for (int s = 0; s < kScales; ++s) {
    const Scale& sc = scales_[s];
    if (s > 0) cur = g.Apply(sc.pool, cur);
    Var gray = g.MatMul(cur, g.Constant(GrayWeights()));
    Var gh = g.Abs(g.Apply(sc.dh, gray));
    Var gv = g.Abs(g.Apply(sc.dv, gray));
    const Var parts[] = {cur, gh, gv};
    Var in = g.ConcatCols(parts);
    Var f = g.AddRow(g.MatMul(in, g.Constant(sc.projection)), g.Constant(sc.bias));
    out.push_back(g.LeakyRelu(f, kSlope));
  }
  return out;
}

double PerceptualExtractor::LossFromFeatures(const std::vector<Tensor>& fa,
                                             const std::vector<Tensor>& fb) const {
  double total = 0.0;
  for (int s = 0; s < kScales; ++s) {
    double acc = 0.0;
    for (size_t i = 0; i < fa[s].size(); ++i) {
      const double d = fa[s][i] - fb[s][i];
      acc += d * d;
    }
    total += acc / static_cast<double>(fa[s].size());
  }
  return total;
}

double PerceptualExtractor::Loss(const Tensor& a, const Tensor& b) const {
  return LossFromFeatures(Features(a), Features(b));
}

Var PerceptualExtractor::LossGraph(Graph& g, Var pixels,
                                   const std::vector<Tensor>& target) const {
  const std::vector<Var> f = FeaturesGraph(g, pixels);
  Var total = g.Mean(g.Square(g.Sub(f[0], g.Constant(target[0]))));
  for (int s = 1; s < kScales; ++s) {
    total = g.Add(total, g.Mean(g.Square(g.Sub(f[s], g.Constant(target[s])))));
  }
  return total;
}

std::vector<double> PerceptualExtractor::Descriptor(const Tensor& image) const {
  std::vector<double> out;
  for (const Tensor& f : Features(image)) {
    const size_t P = f.rows();
    for (size_t c = 0; c < kFeatureChannels; ++c) {
      double acc = 0.0;
      for (size_t p = 0; p < P; ++p) acc += f[p * kFeatureChannels + c];
      out.push_back(acc / static_cast<double>(P));
    }
  }
  return out;
}

}  // namespace semcodec
