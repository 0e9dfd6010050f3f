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
#include "semcodec/encoder.h"
#include "semcodec/scene.h"
#include "semcodec/task_oracle.h"
#include "test_util.h"

namespace semcodec {
namespace {

using testing::RandomTensor;

TEST(Scene, SameSeedSameSample) {
  const SceneConfig cfg;
  RngStream a(7, 0), b(7, 0);
  const SceneSample x = GenerateScene(a, cfg), y = GenerateScene(b, cfg);
  EXPECT_EQ(x.image, y.image);
  EXPECT_EQ(x.labels, y.labels);
}

TEST(Scene, BackgroundOnlyConfigGivesUniformLabels) {
  SceneConfig cfg;
  cfg.sky_band = false;
  cfg.road_band = false;
  cfg.object_probability = 0.0;
  RngStream rng(1, 1);
  const SceneSample s = GenerateScene(rng, cfg);
  for (size_t i = 0; i < s.labels.size(); ++i) ASSERT_EQ(s.labels[i], kBackground);
}

TEST(Scene, EveryClassAppearsOften) {
  const SceneConfig cfg;
  const std::vector<SceneSample> data = GenerateDataset(RngStream(3, 4), cfg, 1000);
  std::vector<int> present(cfg.num_classes + 1, 0);
  for (const SceneSample& s : data) {
    std::vector<bool> seen(cfg.num_classes + 1, false);
    for (int l : s.labels.labels()) seen[static_cast<size_t>(l)] = true;
    for (size_t m = 1; m <= cfg.num_classes; ++m) present[m] += seen[m];
  }
  for (size_t m = 1; m <= cfg.num_classes; ++m) {
    EXPECT_GE(present[m], 300) << "class " << m;
  }
}

TEST(Scene, ConfigTextRoundTrip) {
  SceneConfig cfg;
  cfg.num_classes = 5;
  cfg.texture_noise = 0.0123456789;
  EXPECT_EQ(SceneConfig::Parse(cfg.ToText()), cfg);
  EXPECT_THROW(SceneConfig::Parse("colour = 3"), std::invalid_argument);
  EXPECT_THROW(SceneConfig::Parse("M = 1"), std::invalid_argument);
  EXPECT_THROW(SceneConfig::Parse("H = 30"), std::invalid_argument);
}

TEST(Masks, AllAndAbsentClasses) {
  const LabelMap all(16, 32, 3);
  const SemanticMask m = ExtractMask(all, 3);
  EXPECT_EQ(m.FullCount(), all.size());
  EXPECT_EQ(m.DownCount(), 8u);
  const SemanticMask none = ExtractMask(all, 2);
  EXPECT_EQ(none.FullCount(), 0u);
  EXPECT_EQ(none.DownCount(), 0u);
  EXPECT_TRUE(none.empty());
}

TEST(Masks, MajorityRuleOnBlock) {
  LabelMap labels(8, 8, 1);
  for (size_t i = 0; i < 33; ++i) labels[i] = 2;  // 33 of 64 pixels
  EXPECT_EQ(DownscaleLabels(labels)[0], 2);
  EXPECT_EQ(ExtractMask(labels, 2).down[0], 1);
  EXPECT_EQ(ExtractMask(labels, 1).down[0], 0);
  LabelMap tie(8, 8, 1);
  for (size_t i = 0; i < 32; ++i) tie[i] = 2;
  EXPECT_EQ(DownscaleLabels(tie)[0], 1);  // ties go to the lower id
}

TEST(Masks, DownscaledMasksMatchBruteForceMajority) {
  RngStream rng(8, 1);
  const SceneConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const SceneSample s = GenerateScene(rng, cfg);
    const LabelMap down = DownscaleLabels(s.labels);
    for (size_t u = 0; u < 4; ++u) {
      for (size_t v = 0; v < 8; ++v) {
        std::vector<int> count(cfg.num_classes + 1, 0);
        for (size_t y = 0; y < 8; ++y)
          for (size_t x = 0; x < 8; ++x) ++count[s.labels.at(u * 8 + y, v * 8 + x)];
        int best = 1;
        for (int m = 2; m <= static_cast<int>(cfg.num_classes); ++m)
          if (count[m] > count[best]) best = m;
        ASSERT_EQ(down.at(u, v), best);
      }
    }
  }
}

TEST(Concepts, DecomposeIdentityZeroAndCheckerboard) {
  RngStream rng(2, 2);
  const Tensor f = RandomTensor({3, 2, 4}, rng);
  const SemanticMask all = ExtractMask(LabelMap(16, 32, 1), 1);
  EXPECT_EQ(DecomposeFeatures(f, all).features, f);
  const SemanticMask none = ExtractMask(LabelMap(16, 32, 1), 2);
  EXPECT_EQ(DecomposeFeatures(f, none).features, Tensor(f.shape()));

  LabelMap checker(16, 32, 1);
  for (size_t y = 0; y < 16; ++y)
    for (size_t x = 0; x < 32; ++x) checker.at(y, x) = ((y / 8 + x / 8) % 2) ? 2 : 1;
  const SemanticMask mask = ExtractMask(checker, 2);
  const Tensor c = DecomposeFeatures(f, mask).features;
  for (size_t ch = 0; ch < 3; ++ch)
    for (size_t u = 0; u < 2; ++u)
      for (size_t v = 0; v < 4; ++v)
        EXPECT_EQ(c.at(ch, u, v), (u + v) % 2 ? f.at(ch, u, v) : 0.0);
}

TEST(Concepts, ConceptsPartitionFeatures) {
  RngStream rng(4, 4);
  const SceneConfig cfg;
  const SceneSample s = GenerateScene(rng, cfg);
  const Tensor f = RandomTensor({8, 4, 8}, rng);
  const auto concepts = DecomposeAll(f, ExtractAllMasks(s.labels, cfg.num_classes));
  Tensor sum(f.shape());
  for (const auto& c : concepts) sum = Add(sum, c.features);
  EXPECT_EQ(sum, f);
}

TEST(Concepts, PatchLayoutRoundTrip) {
  RngStream rng(5, 5);
  const Tensor img = RandomTensor({3, 16, 32}, rng);
  EXPECT_EQ(PatchesToImage(ImageToPatches(img), 16, 32), img);
  EXPECT_EQ(PixelsToImage(ImageToPixels(img), 16, 32), img);
  const Tensor f = RandomTensor({5, 2, 4}, rng);
  EXPECT_EQ(CellsToFeatures(FeaturesToCells(f), 2, 4), f);
}

TEST(Encoder, ZeroImageZeroBiasGivesZeroProjection) {
  EncoderConfig cfg;
  cfg.channels = 4;
  RngStream rng(1, 1);
  ParamBlock p = MakeEncoderParams(cfg, rng);
  p.value("enc.b") = Tensor({1, 4}, 0.0);
  const Tensor z = EncodeProjection(Tensor({3, 16, 32}), p, cfg);
  for (double v : z.values()) EXPECT_EQ(v, 0.0);
}

TEST(Encoder, Deterministic) {
  EncoderConfig cfg;
  RngStream rng(1, 1), data(2, 2);
  const ParamBlock p = MakeEncoderParams(cfg, rng);
  const Tensor img = GenerateScene(data, SceneConfig{}).image;
  EXPECT_EQ(EncodeFeatures(img, p, cfg), EncodeFeatures(img, p, cfg));
}

TEST(Encoder, SinglePatchHandComputedProjection) {
  // Weight column c picks patch entry c (dy=0, dx=0, channel c), so the
  // projection of each cell is its top-left pixel's RGB through leaky-relu.
  EncoderConfig cfg;
  cfg.channels = 3;
  ParamBlock p;
  Tensor w({kPatchDim, 3});
  for (size_t c = 0; c < 3; ++c) w.at(c, c) = 1.0;
  p.Add("enc.w", w);
  p.Add("enc.b", Tensor::FromRows({{0.1, -0.5, 0.0}}));
  Tensor img({3, 8, 8});
  img.at(0, 0, 0) = 0.2;
  img.at(1, 0, 0) = 0.3;
  img.at(2, 0, 0) = -0.4;
  const Tensor z = EncodeProjection(img, p, cfg);
  EXPECT_NEAR(z.at(0, 0, 0), 0.3, 1e-15);
  EXPECT_NEAR(z.at(1, 0, 0), -0.2 * 0.2, 1e-15);
  EXPECT_NEAR(z.at(2, 0, 0), -0.4 * 0.2, 1e-15);
}

TEST(Encoder, NormalizedFeaturesHaveTargetSpread) {
  EncoderConfig cfg;
  RngStream rng(1, 1), data(2, 2);
  const ParamBlock p = MakeEncoderParams(cfg, rng);
  const Tensor f = EncodeFeatures(GenerateScene(data, SceneConfig{}).image, p, cfg);
  const size_t cells = f.dim(1) * f.dim(2);
  for (size_t c = 0; c < cfg.channels; ++c) {
    double mean = 0, var = 0;
    for (size_t i = 0; i < cells; ++i) mean += f[c * cells + i];
    mean /= cells;
    for (size_t i = 0; i < cells; ++i) var += std::pow(f[c * cells + i] - mean, 2);
    var /= cells;
    EXPECT_NEAR(mean, 0.0, 1e-9);
    // Below the target when a channel is nearly constant (epsilon).
    EXPECT_LE(std::sqrt(var), cfg.feature_scale + 1e-9);
  }
}

TEST(FeatureClassLoss, UniformHeadGivesMLogM) {
  const size_t M = 4;
  RngStream rng(3, 3);
  ParamBlock head = MakeClassHeadParams(5, M, rng);
  head.value("head.w") = Tensor({5, M});
  head.value("head.b") = Tensor({1, M});
  LabelMap labels(16, 32, 1);
  for (size_t y = 0; y < 16; ++y)
    for (size_t x = 0; x < 32; ++x) labels.at(y, x) = static_cast<int>(x / 8) + 1;
  const Tensor f = RandomTensor({5, 2, 4}, rng);
  const auto concepts = DecomposeAll(f, ExtractAllMasks(labels, M));
  EXPECT_NEAR(FeatureClassLoss(concepts, head), M * std::log(static_cast<double>(M)), 1e-12);
}

TEST(FeatureClassLoss, SharpCorrectHeadApproachesZero) {
  const size_t M = 2;
  ParamBlock head;
  // Channel 0 votes for class 1, channel 1 for class 2.
  head.Add("head.w", Tensor::FromRows({{1, -1}, {-1, 1}}));
  head.Add("head.b", Tensor({1, 2}));
  LabelMap labels(8, 16, 1);
  for (size_t y = 0; y < 8; ++y)
    for (size_t x = 8; x < 16; ++x) labels.at(y, x) = 2;
  double prev = 1e9;
  for (double sharp : {1.0, 5.0, 20.0}) {
    Tensor f({2, 1, 2});
    f.at(0, 0, 0) = sharp;
    f.at(1, 0, 1) = sharp;
    const double l = FeatureClassLoss(DecomposeAll(f, ExtractAllMasks(labels, M)), head);
    EXPECT_LT(l, prev);
    prev = l;
  }
  EXPECT_LT(prev, 1e-8);
}

TEST(FeatureClassLoss, MatchesDirectCrossEntropy) {
  const size_t M = 4, n = 3;
  RngStream rng(6, 6);
  const ParamBlock head = MakeClassHeadParams(n, M, rng);
  const SceneSample s = GenerateScene(rng, testing::SmallScene(M));
  const Tensor f = RandomTensor({n, 2, 4}, rng);
  const auto concepts = DecomposeAll(f, ExtractAllMasks(s.labels, M));
  double expect = 0.0;
  for (const auto& c : concepts) {
    if (c.mask.empty()) continue;
    // Max-pool over the concept's cells, then linear head and softmax.
    std::vector<double> pooled(n, -1e300);
    for (size_t ch = 0; ch < n; ++ch)
      for (size_t cell = 0; cell < 8; ++cell)
        if (c.mask.down[cell]) pooled[ch] = std::max(pooled[ch], f[ch * 8 + cell]);
    std::vector<double> logits(M);
    for (size_t k = 0; k < M; ++k) {
      logits[k] = head.value("head.b")[k];
      for (size_t ch = 0; ch < n; ++ch) logits[k] += pooled[ch] * head.value("head.w").at(ch, k);
    }
    double z = 0.0;
    for (double l : logits) z += std::exp(l);
    expect -= logits[static_cast<size_t>(c.class_id - 1)] - std::log(z);
  }
  EXPECT_NEAR(FeatureClassLoss(concepts, head), expect, 1e-12);
}

TEST(Oracle, CleanScenesAreSegmentedAccurately) {
  const SceneConfig cfg;
  const PrototypeSegmenter seg = PrototypeSegmenter::Fit(cfg);
  const auto data = GenerateDataset(RngStream(12, 12), cfg, 100);
  double acc = 0.0;
  for (const SceneSample& s : data) acc += PixelAccuracy(seg.Segment(s.image), s.labels);
  EXPECT_GE(acc / 100.0, 0.95);
}

TEST(Oracle, PrototypeColorImageIsUniform) {
  const SceneConfig cfg;
  const PrototypeSegmenter seg = PrototypeSegmenter::Fit(cfg);
  const Color c = seg.prototypes()[4];
  Tensor img({3, 32, 64});
  for (size_t ch = 0; ch < 3; ++ch)
    for (size_t i = 0; i < 32 * 64; ++i) img[ch * 32 * 64 + i] = c[ch];
  const LabelMap l = seg.Segment(img);
  for (size_t i = 0; i < l.size(); ++i) ASSERT_EQ(l[i], 5);
  EXPECT_EQ(seg.Predict(img).labels, seg.Predict(img).labels);
}

}  // namespace
}  // namespace semcodec
