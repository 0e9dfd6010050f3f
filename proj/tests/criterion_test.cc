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

#include <gtest/gtest.h>

#include <cmath>

#include "semcodec/concepts.h"
#include "semcodec/criterion.h"
#include "semcodec/graph.h"
#include "semcodec/perceptual.h"
#include "semcodec/task_oracle.h"
#include "test_util.h"

namespace semcodec {
namespace {

using testing::RandomTensor;

TEST(Iou, EdgeCases) {
  const std::vector<uint8_t> a = {1, 1, 0, 0}, b = {0, 0, 1, 1}, none = {0, 0, 0, 0};
  EXPECT_EQ(Iou(a, a), 1.0);
  EXPECT_EQ(Iou(a, b), 0.0);
  EXPECT_EQ(Iou(none, none), 1.0);
  const std::vector<uint8_t> gt = {1, 1, 0}, pred = {0, 1, 1};
  EXPECT_DOUBLE_EQ(Iou(gt, pred), 1.0 / 3.0);
}

TaskPrediction Seg(LabelMap l) { return {TaskKind::kSegmentation, std::move(l), {}}; }

TEST(MiouLoss, IdenticalDisjointAndHalfOverlap) {
  LabelMap a(1, 4, 1);
  a[2] = a[3] = 2;
  EXPECT_EQ(MiouLoss(Seg(a), Seg(a), 2), 0.0);
  LabelMap swapped(1, 4, 2);
  swapped[2] = swapped[3] = 1;
  EXPECT_EQ(MiouLoss(Seg(a), Seg(swapped), 2), 1.0);
  // Class 1 {0,1,4} vs {0,1,5} and class 2 {2,3,5} vs {2,3,4}: both 2/4.
  LabelMap p(1, 6), q(1, 6);
  const int pv[] = {1, 1, 2, 2, 1, 2}, qv[] = {1, 1, 2, 2, 2, 1};
  for (size_t i = 0; i < 6; ++i) {
    p[i] = pv[i];
    q[i] = qv[i];
  }
  EXPECT_DOUBLE_EQ(ClassIou(p, q, 1), 0.5);
  EXPECT_DOUBLE_EQ(ClassIou(p, q, 2), 0.5);
  EXPECT_DOUBLE_EQ(MiouLoss(Seg(p), Seg(q), 2), 0.5);
}

TEST(DetLoss, Values) {
  LabelMap a(1, 2, 1);
  a[1] = 2;
  EXPECT_EQ(DetLoss(Seg(a), Seg(a), 2), 0.0);
  LabelMap b(1, 2, 2);
  b[1] = 1;
  EXPECT_NEAR(DetLoss(Seg(a), Seg(b), 2), -std::log(1e-8), 1e-12);
  EXPECT_NEAR(DetLossFromMiou(std::exp(-1.0)), 1.0, 1e-15);
  EXPECT_EQ(DetLossFromMiou(1.0), 0.0);
  EXPECT_NEAR(DetLossFromMiou(0.0), 18.420680743952367, 1e-12);
  LabelMap c(1, 3, 1), d(1, 3, 1);
  c[2] = 2;
  d[1] = 2;
  d[2] = 2;  // class 1 {0,1} vs {0}: 1/2, class 2 {2} vs {1,2}: 1/2
  EXPECT_NEAR(DetLoss(Seg(c), Seg(d), 2), std::log(2.0), 1e-12);
}

TEST(CeLoss, Values) {
  const std::vector<double> onehot = {0, 1, 0};
  EXPECT_EQ(CeLoss(2, onehot), 0.0);
  const std::vector<double> half = {0.5, 0.5};
  EXPECT_NEAR(CeLoss(1, half), 0.34657359027997264, 1e-12);
  const std::vector<double> p = {0.2, 0.5, 0.3};
  EXPECT_NEAR(CeLoss(3, p, 1e-9), CeLoss(3, p, 0.0), 1e-8);
  // Smoothed target: 0.9 on the label, 0.05 elsewhere, times 1/M.
  EXPECT_NEAR(CeLoss(3, p, 0.1),
              -(0.05 * std::log(0.2) + 0.05 * std::log(0.5) + 0.9 * std::log(0.3)) / 3.0, 1e-12);
}

TEST(CeLoss, RejectsBadInput) {
  const std::vector<double> p = {0.2, 0.5, 0.3};
  EXPECT_THROW(CeLoss(0, p), std::invalid_argument);
  EXPECT_THROW(CeLoss(4, p), std::invalid_argument);
  EXPECT_THROW(CeLoss(1, p, 1.0), std::invalid_argument);
  const std::vector<double> bad = {0.2, 0.2};
  EXPECT_THROW(CeLoss(1, bad), std::invalid_argument);
}

TEST(CompositeLoss, Arithmetic) {
  EXPECT_NEAR(CompositeLoss(0.1, 0.2, 0.03, {1.0, 10.0}), 0.6, 1e-15);
  EXPECT_EQ(CompositeLoss(0.7, 0.2, 0.5, {0.0, 0.0}), 0.2);
  const CriterionWeights w{2.0, 3.0};
  const double base = CompositeLoss(0.1, 0.2, 0.3, w);
  EXPECT_NEAR(CompositeLoss(0.2, 0.2, 0.3, w) - base, 2.0 * 0.1, 1e-15);
  EXPECT_NEAR(CompositeLoss(0.1, 0.3, 0.3, w) - base, 0.1, 1e-15);
  EXPECT_NEAR(CompositeLoss(0.1, 0.2, 0.4, w) - base, 3.0 * 0.1, 1e-15);
  EXPECT_THROW((CriterionWeights{-1.0, 1.0}.Validate()), std::invalid_argument);
}

TEST(PixelMetrics, PsnrAndSsim) {
  RngStream rng(81, 1);
  Tensor a({3, 16, 16});
  for (double& v : a.values()) v = rng.Uniform();
  const PixelMetrics same = ComputePixelMetrics(a, a);
  EXPECT_EQ(same.psnr, 99.0);
  EXPECT_NEAR(same.ssim, 1.0, 1e-12);
  Tensor b = a;
  for (size_t i = 0; i < b.size(); ++i) b[i] += (i % 2 ? 0.1 : -0.1);  // MSE 0.01
  EXPECT_NEAR(Psnr(a, b), 20.0, 1e-9);
  for (double& v : b.values()) v = rng.Uniform();
  EXPECT_NEAR(Ssim(a, b), Ssim(b, a), 1e-15);
}

// ---- perceptual proxy

// Independent loop implementation of the perceptual extractor, using the
// extractor's fixed projections.
std::vector<std::vector<double>> ReferenceFeatures(const PerceptualExtractor& ex,
                                                   const Tensor& image) {
  size_t h = image.dim(1), w = image.dim(2);
  std::vector<double> rgb(image.values());  // [3][h][w]
  std::vector<std::vector<double>> out;
  for (int s = 0; s < PerceptualExtractor::kScales; ++s) {
    if (s > 0) {
      std::vector<double> pooled(3 * (h / 2) * (w / 2));
      for (size_t c = 0; c < 3; ++c)
        for (size_t y = 0; y < h / 2; ++y)
          for (size_t x = 0; x < w / 2; ++x) {
            double acc = 0;
            for (size_t dy = 0; dy < 2; ++dy)
              for (size_t dx = 0; dx < 2; ++dx) acc += rgb[(c * h + 2 * y + dy) * w + 2 * x + dx];
            pooled[(c * (h / 2) + y) * (w / 2) + x] = acc / 4;
          }
      rgb = pooled;
      h /= 2;
      w /= 2;
    }
    auto gray = [&](size_t y, size_t x) {
      return (rgb[(0 * h + y) * w + x] + rgb[(1 * h + y) * w + x] + rgb[(2 * h + y) * w + x]) / 3;
    };
    std::vector<double> f;
    for (size_t y = 0; y < h; ++y) {
      for (size_t x = 0; x < w; ++x) {
        const double in[5] = {rgb[(0 * h + y) * w + x], rgb[(1 * h + y) * w + x],
                              rgb[(2 * h + y) * w + x],
                              x + 1 < w ? std::abs(gray(y, x + 1) - gray(y, x)) : 0.0,
                              y + 1 < h ? std::abs(gray(y + 1, x) - gray(y, x)) : 0.0};
        for (size_t k = 0; k < 8; ++k) {
          double z = ex.bias(s)[k];
          for (size_t i = 0; i < 5; ++i) z += in[i] * ex.projection(s).at(i, k);
          f.push_back(z > 0 ? z : 0.2 * z);
        }
      }
    }
    out.push_back(f);
  }
  return out;
}

double ReferenceLoss(const PerceptualExtractor& ex, const Tensor& a, const Tensor& b) {
  const auto fa = ReferenceFeatures(ex, a), fb = ReferenceFeatures(ex, b);
  double total = 0.0;
  for (size_t s = 0; s < fa.size(); ++s) {
    double acc = 0;
    for (size_t i = 0; i < fa[s].size(); ++i) acc += (fa[s][i] - fb[s][i]) * (fa[s][i] - fb[s][i]);
    total += acc / fa[s].size();
  }
  return total;
}

TEST(Perceptual, ZeroOnIdenticalAndSymmetric) {
  const PerceptualExtractor ex(16, 32);
  RngStream rng(82, 1);
  Tensor a({3, 16, 32}), b({3, 16, 32});
  for (double& v : a.values()) v = rng.Uniform();
  for (double& v : b.values()) v = rng.Uniform();
  EXPECT_EQ(ex.Loss(a, a), 0.0);
  EXPECT_DOUBLE_EQ(ex.Loss(a, b), ex.Loss(b, a));
}

TEST(Perceptual, MatchesSecondImplementation) {
  const PerceptualExtractor ex(16, 32, 1234);
  RngStream rng(83, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor a({3, 16, 32}), b({3, 16, 32});
    for (double& v : a.values()) v = rng.Uniform();
    for (double& v : b.values()) v = rng.Uniform();
    EXPECT_NEAR(ex.Loss(a, b), ReferenceLoss(ex, a, b), 1e-12);
  }
}

TEST(Perceptual, GraphAgreesWithTensorPath) {
  const PerceptualExtractor ex(8, 16);
  RngStream rng(84, 1);
  Tensor a({3, 8, 16}), b({3, 8, 16});
  for (double& v : a.values()) v = rng.Uniform();
  for (double& v : b.values()) v = rng.Uniform();
  Graph g;
  Var loss = ex.LossGraph(g, g.Constant(ImageToPixels(b)), ex.Features(a));
  EXPECT_NEAR(g.scalar(loss), ex.Loss(a, b), 1e-12);
  // Gradient with respect to the pixels.
  ParamBlock px;
  px.Add("x", ImageToPixels(b));
  auto build = [&](Graph& h) { return ex.LossGraph(h, h.Param(px, "x"), ex.Features(a)); };
  Graph h;
  h.Backward(build(h));
  const std::vector<double> analytic = px.FlatGrads();
  const std::vector<double> numeric = testing::NumericGradient(px, [&] {
    Graph k;
    return k.scalar(build(k));
  });
  EXPECT_LT(testing::RelativeError(analytic, numeric), 1e-6);
}

// ---- Frechet proxy

// Cyclic Jacobi eigenvalues of a symmetric matrix (row-major).
std::vector<double> JacobiEigen(std::vector<double> a, size_t n, std::vector<double>* vecs) {
  std::vector<double> v(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-30) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p * n + q]) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2 * a[p * n + q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
  if (vecs) *vecs = v;
  return eig;
}

std::vector<double> Covariance(const std::vector<std::vector<double>>& x, std::vector<double>& mu) {
  const size_t n = x.size(), d = x[0].size();
  mu.assign(d, 0.0);
  for (const auto& r : x)
    for (size_t i = 0; i < d; ++i) mu[i] += r[i] / n;
  std::vector<double> c(d * d, 0.0);
  for (const auto& r : x)
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) c[i * d + j] += (r[i] - mu[i]) * (r[j] - mu[j]) / (n - 1);
  return c;
}

double ReferenceFrechet(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b) {
  const size_t d = a[0].size();
  std::vector<double> ma, mb;
  const std::vector<double> sa = Covariance(a, ma), sb = Covariance(b, mb);
  std::vector<double> vec;
  const std::vector<double> ea = JacobiEigen(sa, d, &vec);
  // Sa^1/2 = V diag(sqrt(e)) V^T.
  std::vector<double> ra(d * d, 0.0);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k < d; ++k)
        ra[i * d + j] += vec[i * d + k] * std::sqrt(std::max(ea[k], 0.0)) * vec[j * d + k];
  std::vector<double> tmp(d * d, 0.0), inner(d * d, 0.0);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k < d; ++k) tmp[i * d + j] += ra[i * d + k] * sb[k * d + j];
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k < d; ++k) inner[i * d + j] += tmp[i * d + k] * ra[k * d + j];
  double tr_sqrt = 0.0;
  for (double e : JacobiEigen(inner, d, nullptr)) tr_sqrt += std::sqrt(std::max(e, 0.0));
  double dist = 0.0;
  for (size_t i = 0; i < d; ++i) {
    dist += (ma[i] - mb[i]) * (ma[i] - mb[i]) + sa[i * d + i] + sb[i * d + i];
  }
  return std::max(dist - 2 * tr_sqrt, 0.0);
}

TEST(Frechet, IdenticalSetsAndMeanShift) {
  RngStream rng(85, 1);
  std::vector<std::vector<double>> a(30, std::vector<double>(4));
  for (auto& r : a)
    for (double& v : r) v = rng.Normal();
  EXPECT_NEAR(FrechetDistance(a, a), 0.0, 1e-8);
  auto b = a;
  const double d[4] = {0.5, -1.0, 2.0, 0.0};
  for (auto& r : b)
    for (size_t i = 0; i < 4; ++i) r[i] += d[i];
  EXPECT_NEAR(FrechetDistance(a, b), 0.25 + 1.0 + 4.0, 1e-8);
}

TEST(Frechet, MatchesJacobiOracle) {
  RngStream rng(86, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t d = 2 + rng.UniformInt(5);
    std::vector<std::vector<double>> a(20, std::vector<double>(d)), b(25, std::vector<double>(d));
    for (auto& r : a)
      for (double& v : r) v = rng.Normal();
    for (auto& r : b)
      for (size_t i = 0; i < d; ++i) r[i] = 0.3 + (1.0 + 0.2 * i) * rng.Normal();
    EXPECT_NEAR(FrechetDistance(a, b), ReferenceFrechet(a, b), 1e-8);
  }
}

TEST(Frechet, NeedsTwoVectors) {
  EXPECT_THROW(FrechetDistance({{1.0}}, {{1.0}, {2.0}}), std::invalid_argument);
}

TEST(SemanticCriterion, ReportUsesWeights) {
  const SceneConfig cfg;
  const PrototypeSegmenter seg = PrototypeSegmenter::Fit(cfg);
  const PerceptualExtractor ex(cfg.height, cfg.width);
  const SemanticCriterion crit(seg, ex, {1.0, 10.0}, cfg.num_classes);
  RngStream rng(87, 1);
  const SceneSample s = GenerateScene(rng, cfg);
  const auto ref = crit.Prepare(s.image);
  const CriterionReport same = crit.Evaluate(ref, s.image, 0.25);
  EXPECT_EQ(same.semantic, 0.0);
  EXPECT_EQ(same.perceptual, 0.0);
  EXPECT_DOUBLE_EQ(same.composite, 0.25);
  Tensor gray(s.image.shape(), 0.5);
  const CriterionReport r = crit.Evaluate(ref, gray, 0.5);
  EXPECT_NEAR(r.composite, 0.5 + r.semantic + 10.0 * r.perceptual, 1e-12);
  EXPECT_NEAR(r.perceptual, ex.Loss(s.image, gray), 1e-12);
}

}  // namespace
}  // namespace semcodec
