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

#include <algorithm>
#include <cmath>

#include "semcodec/concepts.h"
#include "semcodec/criterion.h"
#include "semcodec/decoder.h"
#include "semcodec/encoder.h"
#include "semcodec/finetune.h"
#include "semcodec/graph.h"
#include "semcodec/perceptual.h"
#include "semcodec/system.h"
#include "semcodec/task_oracle.h"
#include "semcodec/training.h"
#include "test_util.h"

namespace semcodec {
namespace {

using testing::RandomTensor;
using testing::SmallScene;

void Fill(Tensor& t, double v) { std::fill(t.values().begin(), t.values().end(), v); }

struct Fixture {
  DecoderConfig config;
  ParamBlock params;
  LabelMap down;
  Tensor features;  // [n x h x w]
};

Fixture MakeFixture(uint64_t seed, size_t num_classes = 4) {
  RngStream rng(seed, 1);
  const SceneSample s = GenerateScene(rng, SmallScene(num_classes));
  Fixture f;
  f.config.num_classes = num_classes;
  f.params = MakeDecoderParams(f.config, rng);
  f.down = DownscaleLabels(s.labels);
  f.features = RandomTensor({f.config.channels, f.down.height(), f.down.width()}, rng, 0.5);
  return f;
}

Tensor LocalImage(const Fixture& f) {
  Graph g;
  Var v = LocalGenerateGraph(g, g.Constant(FeaturesToCells(f.features)), f.down,
                             ParamRef(f.params), f.config);
  return g.value(v);
}

Tensor GlobalPatches(const Fixture& f, const LabelMap& down, bool modulate) {
  Graph g;
  Var v = GlobalGenerateGraph(g, g.Constant(FeaturesToCells(f.features)), down,
                              ParamRef(f.params), f.config, modulate);
  return g.value(v);
}

TEST(LocalGenerator, EveryPixelWrittenOnce) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Fixture f = MakeFixture(seed);
    // Head m emits the constant m; a pixel written twice would hold a sum.
    for (size_t m = 1; m <= f.config.num_classes; ++m) {
      Fill(f.params.value("loc.w2." + std::to_string(m)), 0.0);
      Fill(f.params.value("loc.b2." + std::to_string(m)), static_cast<double>(m));
    }
    const Tensor out = LocalImage(f);
    for (size_t cell = 0; cell < f.down.size(); ++cell) {
      for (size_t j = 0; j < kPatchDim; ++j) {
        ASSERT_EQ(out[cell * kPatchDim + j], static_cast<double>(f.down[cell]));
      }
    }
  }
}

TEST(LocalGenerator, ZeroFeaturesAndBiasesGiveZeroImage) {
  Fixture f = MakeFixture(2);
  Fill(f.features, 0.0);
  const Reconstruction r = Decode(f.features, f.down, f.params, f.config);
  for (double v : r.local.values()) EXPECT_EQ(v, 0.0);
  for (double v : r.global.values()) EXPECT_EQ(v, 0.0);
  for (double v : r.fused.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.local.shape(), (std::vector<size_t>{3, 16, 32}));
}

TEST(LocalGenerator, SingleClassUsesOneHead) {
  Fixture f = MakeFixture(3);
  LabelMap one(f.down.height(), f.down.width(), 2);
  f.down = one;
  const Tensor out = LocalImage(f);
  Graph g;
  Var trunk = g.LeakyRelu(g.AddRow(g.MatMul(g.Constant(FeaturesToCells(f.features)),
                                            g.Constant(f.params.value("loc.w1"))),
                                   g.Constant(f.params.value("loc.b1"))),
                          0.2);
  Var y = g.AddRow(g.MatMul(trunk, g.Constant(f.params.value("loc.w2.2"))),
                   g.Constant(f.params.value("loc.b2.2")));
  for (size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], g.value(y)[i], 1e-14);
}

TEST(LocalGenerator, ConceptChangesStayInsideItsRegion) {
  Fixture f = MakeFixture(4);
  const Tensor before = LocalImage(f);
  const int m = f.down[0];
  const size_t n = f.config.channels, cells = f.down.size();
  for (size_t c = 0; c < n; ++c)
    for (size_t i = 0; i < cells; ++i)
      if (f.down[i] == m) f.features[c * cells + i] += 0.3;
  const Tensor after = LocalImage(f);
  bool changed = false;
  for (size_t i = 0; i < cells; ++i) {
    for (size_t j = 0; j < kPatchDim; ++j) {
      const double d = std::abs(after[i * kPatchDim + j] - before[i * kPatchDim + j]);
      if (f.down[i] == m) {
        changed = changed || d > 0;
      } else {
        EXPECT_EQ(d, 0.0);
      }
    }
  }
  EXPECT_TRUE(changed);
}

TEST(GlobalGenerator, IdentityModulationIsPlainDecode) {
  const Fixture f = MakeFixture(5);
  const Tensor a = GlobalPatches(f, f.down, true), b = GlobalPatches(f, f.down, false);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(GlobalGenerator, ModulationDependsOnLabels) {
  Fixture f = MakeFixture(6);
  RngStream rng(6, 2);
  for (double& v : f.params.value("glob.gamma").values()) v = 1.0 + 0.5 * rng.Normal();
  for (double& v : f.params.value("glob.beta").values()) v = 0.5 * rng.Normal();
  LabelMap other = f.down;
  for (size_t i = 0; i < other.size(); ++i) other[i] = other[i] % 4 + 1;
  const Tensor a = GlobalPatches(f, f.down, true), b = GlobalPatches(f, other, true);
  double diff = 0;
  for (size_t i = 0; i < a.size(); ++i) diff += std::abs(a[i] - b[i]);
  EXPECT_GT(diff, 1e-3);
}

TEST(GlobalGenerator, MatchesHandTrace) {
  DecoderConfig cfg;
  cfg.channels = 2;
  cfg.hidden = 2;
  cfg.num_classes = 2;
  RngStream rng(7, 1);
  ParamBlock p = MakeDecoderParams(cfg, rng);
  for (auto& e : p.entries())
    for (double& v : e.value.values()) v = rng.Normal();
  LabelMap down(1, 2);
  down[0] = 2;
  down[1] = 1;
  Tensor cells = Tensor::Matrix(2, 2);
  cells[0] = 0.4;
  cells[1] = -0.7;
  cells[2] = -0.2;
  cells[3] = 0.9;
  Graph g;
  const Tensor out = g.value(GlobalGenerateGraph(g, g.Constant(cells), down, ParamRef(p), cfg));
  const Tensor &w1 = p.value("glob.w1"), &b1 = p.value("glob.b1"), &gm = p.value("glob.gamma"),
               &bt = p.value("glob.beta"), &w2 = p.value("glob.w2"), &b2 = p.value("glob.b2");
  for (size_t i = 0; i < 2; ++i) {
    const size_t cls = static_cast<size_t>(down[i] - 1);
    double hid[2];
    for (size_t k = 0; k < 2; ++k) {
      double z = b1[k] + cells[2 * i] * w1[k] + cells[2 * i + 1] * w1[2 + k];
      z = z > 0 ? z : 0.2 * z;
      hid[k] = z * gm[cls * 2 + k] + bt[cls * 2 + k];
    }
    for (size_t j = 0; j < kPatchDim; ++j) {
      const double expect = b2[j] + hid[0] * w2[j] + hid[1] * w2[kPatchDim + j];
      EXPECT_NEAR(out[i * kPatchDim + j], expect, 1e-13);
    }
  }
}

TEST(Attention, DecodedWeightsPartitionOne) {
  for (uint64_t seed = 10; seed < 15; ++seed) {
    Fixture f = MakeFixture(seed);
    RngStream rng(seed, 3);
    for (double& v : f.params.value("att.w").values()) v = 3.0 * rng.Normal();
    const Reconstruction r = Decode(f.features, f.down, f.params, f.config);
    for (size_t p = 0; p < r.weight_local.size(); ++p) {
      EXPECT_GT(r.weight_local[p], 0.0);
      EXPECT_GT(r.weight_global[p], 0.0);
      EXPECT_NEAR(r.weight_local[p] + r.weight_global[p], 1.0, 1e-12);
    }
    const Tensor fused = AttentionFuse(r.local, r.global, r.weight_local, r.weight_global);
    for (size_t i = 0; i < fused.size(); ++i) EXPECT_NEAR(fused[i], r.fused[i], 1e-12);
  }
}

TEST(AttentionFuse, ConstantWeights) {
  RngStream rng(11, 1);
  const Tensor a = RandomTensor({3, 4, 4}, rng), b = RandomTensor({3, 4, 4}, rng);
  const Tensor one({4, 4}, 1.0), zero({4, 4}, 0.0), half({4, 4}, 0.5);
  const Tensor x = AttentionFuse(a, b, one, zero);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(x[i], a[i]);
  const Tensor avg = AttentionFuse(a, b, half, half);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(avg[i], 0.5 * (a[i] + b[i]), 1e-15);
}

TEST(AttentionFuse, ConvexCombination) {
  RngStream rng(12, 1);
  const Tensor a = RandomTensor({3, 8, 8}, rng), b = RandomTensor({3, 8, 8}, rng);
  Tensor wl({8, 8}), wg({8, 8});
  for (size_t p = 0; p < 64; ++p) {
    wl[p] = rng.Uniform();
    wg[p] = 1.0 - wl[p];
  }
  const Tensor x = AttentionFuse(a, b, wl, wg);
  for (size_t i = 0; i < x.size(); ++i) {
    EXPECT_GE(x[i], std::min(a[i], b[i]) - 1e-15);
    EXPECT_LE(x[i], std::max(a[i], b[i]) + 1e-15);
  }
}

TEST(AttentionFuse, RejectsInvalidWeights) {
  const Tensor a({3, 2, 2}), b({3, 2, 2});
  EXPECT_THROW(AttentionFuse(a, b, Tensor({2, 2}, 0.6), Tensor({2, 2}, 0.6)),
               std::invalid_argument);
  EXPECT_THROW(AttentionFuse(a, b, Tensor({2, 2}, 1.5), Tensor({2, 2}, -0.5)),
               std::invalid_argument);
  EXPECT_THROW(AttentionFuse(a, b, Tensor({3, 3}, 0.5), Tensor({3, 3}, 0.5)),
               std::invalid_argument);
  EXPECT_THROW(AttentionFuse(a, Tensor({3, 2, 3}), Tensor({2, 2}, 0.5), Tensor({2, 2}, 0.5)),
               std::invalid_argument);
}

TEST(Hinge, Values) {
  const double one[] = {1.0}, minus_one[] = {-1.0}, zero[] = {0.0};
  EXPECT_EQ(ComputeHingeLosses(one, minus_one).discriminator, 0.0);
  EXPECT_EQ(ComputeHingeLosses(zero, zero).discriminator, 2.0);
  EXPECT_EQ(ComputeHingeLosses(zero, zero).generator, 0.0);
  double prev = ComputeHingeLosses(zero, std::vector<double>{-2.0}).generator;
  for (double f = -1.9; f < 2.0; f += 0.1) {
    const double fake[] = {f};
    const double lg = ComputeHingeLosses(zero, fake).generator;
    EXPECT_LT(lg, prev);
    prev = lg;
  }
  EXPECT_THROW(ComputeHingeLosses({}, zero), std::invalid_argument);
}

TEST(Hinge, ZeroExactlyWhenMarginsHold) {
  RngStream rng(13, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> real(3), fake(2);
    for (double& v : real) v = 2.0 * rng.Normal();
    for (double& v : fake) v = 2.0 * rng.Normal();
    bool margins = true;
    for (double v : real) margins = margins && v >= 1.0;
    for (double v : fake) margins = margins && v <= -1.0;
    const HingeLosses h = ComputeHingeLosses(real, fake);
    EXPECT_EQ(h.discriminator == 0.0, margins);
    Graph g;
    std::vector<Var> rv, fv;
    for (double v : real) rv.push_back(g.Constant(Tensor::Matrix(1, 1, v)));
    for (double v : fake) fv.push_back(g.Constant(Tensor::Matrix(1, 1, v)));
    EXPECT_NEAR(g.scalar(HingeDiscriminatorGraph(g, rv, fv)), h.discriminator, 1e-14);
  }
}

TEST(JointLoss, Arithmetic) {
  EXPECT_EQ(JointGeneratorLoss(-0.3, 0.5, 0.7, 0.0, 0.0), -0.3);
  EXPECT_NEAR(JointGeneratorLoss(-0.3, 0.05, 0.2, 10.0, 1.0), -0.3 + 0.5 + 0.2, 1e-15);
}

TEST(JointLoss, GradientReachesEncoder) {
  const SceneConfig scene = SmallScene();
  RngStream rng(14, 1);
  const SceneSample s = GenerateScene(rng, scene);
  EncoderConfig ec;
  ec.channels = 4;
  ParamBlock enc = MakeEncoderParams(ec, rng);
  ParamBlock head = MakeClassHeadParams(ec.channels, scene.num_classes, rng);
  DecoderConfig dc;
  dc.channels = ec.channels;
  dc.num_classes = scene.num_classes;
  dc.hidden = 8;
  const ParamBlock dec = MakeDecoderParams(dc, rng);
  const PerceptualExtractor ex(scene.height, scene.width);
  const LabelMap down = DownscaleLabels(s.labels);
  const auto masks = ExtractAllMasks(s.labels, scene.num_classes);
  const auto target = ex.Features(s.image);
  const Tensor patches = ImageToPatches(s.image);
  auto build = [&](Graph& g) {
    Var f = EncodeFeaturesGraph(g, g.Constant(patches), ParamRef(enc), ec);
    const DecoderVars v = DecodeGraph(g, f, down, ParamRef(dec), dc);
    Var lp = ex.LossGraph(g, PatchesToPixelsGraph(g, v.fused, scene.height, scene.width), target);
    Var lc = FeatureClassLossGraph(g, f, masks, ParamRef(head));
    return g.Add(g.Scale(lp, 10.0), lc);
  };
  Graph g;
  g.Backward(build(g));
  const std::vector<double> analytic = enc.FlatGrads();
  double norm = 0;
  for (double v : analytic) norm += v * v;
  EXPECT_GT(norm, 1e-12);
  const std::vector<double> numeric = testing::NumericGradient(enc, [&] {
    Graph h;
    return h.scalar(build(h));
  });
  EXPECT_LT(testing::RelativeError(analytic, numeric), 1e-5);
}

SemanticSystem SmallSystem(uint64_t seed) {
  return SemanticSystem::Create(SmallScene(), 4, seed);
}

TEST(Stage1, DiscriminatorAloneSeparates) {
  SemanticSystem sys = SmallSystem(15);
  const auto data = GenerateDataset(RngStream(15, 2), sys.scene, 16);
  Stage1Config cfg;
  cfg.alternations = 60;
  cfg.update_generator = false;
  cfg.eval_scenes = 2;
  cfg.adam.learning_rate = 1e-2;
  const PerceptualExtractor ex(sys.scene.height, sys.scene.width);
  const ParamBlock encoder = sys.encoder;
  const Stage1Result r = TrainStage1(sys, data, cfg, ex);
  EXPECT_LT(r.log.back().loss_d, 2.0);
  EXPECT_TRUE(sys.encoder == encoder);
}

TEST(Stage1, DeterministicForSeed) {
  const SceneConfig scene = SmallScene();
  const auto data = GenerateDataset(RngStream(16, 2), scene, 8);
  Stage1Config cfg;
  cfg.alternations = 5;
  cfg.eval_scenes = 2;
  const PerceptualExtractor ex(scene.height, scene.width);
  SemanticSystem a = SmallSystem(16), b = SmallSystem(16);
  TrainStage1(a, data, cfg, ex);
  TrainStage1(b, data, cfg, ex);
  EXPECT_TRUE(a.encoder == b.encoder);
  EXPECT_TRUE(a.decoder == b.decoder);
  EXPECT_TRUE(a.discriminator == b.discriminator);
  EXPECT_EQ(a.stage, TrainingStage::kStage1);
}

TEST(Stage1, ReducesPerceptualLoss) {
  SemanticSystem sys = SmallSystem(17);
  const auto data = GenerateDataset(RngStream(17, 2), sys.scene, 16);
  Stage1Config cfg;
  cfg.alternations = 100;
  cfg.eval_scenes = 8;
  cfg.adam.learning_rate = 2e-3;
  const PerceptualExtractor ex(sys.scene.height, sys.scene.width);
  const Stage1Result r = TrainStage1(sys, data, cfg, ex);
  EXPECT_LT(r.final_perceptual, r.initial_perceptual);
  EXPECT_EQ(r.log.size(), 100u);
}

struct Stage3Fixture {
  SceneConfig scene = SmallScene();
  PrototypeSegmenter seg = PrototypeSegmenter::Fit(scene, 64);
  PerceptualExtractor ex{scene.height, scene.width};
  SemanticCriterion crit{seg, ex, {1.0, 10.0}, scene.num_classes};
  std::vector<SceneSample> data = GenerateDataset(RngStream(18, 2), scene, 4);
};

TEST(Stage3, ZeroRatesLeaveParametersUnchanged) {
  Stage3Fixture fx;
  SemanticSystem sys = SmallSystem(18);
  sys.stage = TrainingStage::kStage2;
  const SemanticSystem before = sys;
  Stage3Config cfg;
  cfg.iterations = 3;
  cfg.batch = 2;
  cfg.stage1.adam.learning_rate = 0.0;
  cfg.agent.alpha = 0.0;
  const Stage3Result r = FinetuneStage3(sys, fx.data, fx.crit, cfg, fx.ex);
  EXPECT_EQ(r.log.size(), 3u);
  EXPECT_TRUE(sys.encoder == before.encoder);
  EXPECT_TRUE(sys.head == before.head);
  EXPECT_TRUE(sys.decoder == before.decoder);
  EXPECT_TRUE(sys.discriminator == before.discriminator);
  EXPECT_TRUE(sys.policy == before.policy);
  EXPECT_EQ(sys.stage, TrainingStage::kStage3);
  EXPECT_DOUBLE_EQ(r.before.composite, r.after.composite);
}

TEST(Stage3, RequiresStage2) {
  Stage3Fixture fx;
  SemanticSystem sys = SmallSystem(19);
  sys.stage = TrainingStage::kStage1;
  Stage3Config cfg;
  cfg.iterations = 1;
  EXPECT_THROW(FinetuneStage3(sys, fx.data, fx.crit, cfg, fx.ex), std::logic_error);
}

}  // namespace
}  // namespace semcodec
