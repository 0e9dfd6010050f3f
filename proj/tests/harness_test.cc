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
#include <filesystem>
#include <sstream>

#include "semcodec/bd_metric.h"
#include "semcodec/bitstream.h"
#include "semcodec/channel.h"
#include "semcodec/harness.h"
#include "semcodec/system.h"
#include "test_util.h"

namespace semcodec {
namespace {

using testing::SmallScene;

BitVector RandomBits(size_t n, RngStream& rng) {
  BitVector b;
  for (size_t i = 0; i < n; ++i) b.PushBit(rng.Uniform() < 0.5);
  return b;
}

size_t CountFlips(const BitVector& a, const BitVector& b) {
  size_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) n += a.Bit(i) != b.Bit(i);
  return n;
}

TEST(Awgn, HighSnrIsNoiseless) {
  RngStream rng(1, 1);
  const BitVector bits = RandomBits(1000000, rng);
  EXPECT_EQ(CountFlips(bits, AwgnTransmit(bits, 60.0, rng)), 0u);
}

TEST(Awgn, VeryLowSnrIsACoinFlip) {
  RngStream rng(2, 1);
  const size_t n = 1000000;
  const BitVector bits = RandomBits(n, rng);
  const double ber = CountFlips(bits, AwgnTransmit(bits, -80.0, rng)) / static_cast<double>(n);
  EXPECT_LT(std::abs(ber - 0.5), 3 * std::sqrt(0.25 / n));
  EXPECT_NEAR(BpskBitErrorRate(-80.0), 0.5, 1e-3);
}

TEST(Awgn, BitErrorRateMatchesGaussianTail) {
  RngStream rng(3, 1);
  const size_t n = 1000000;
  const BitVector bits = RandomBits(n, rng);
  const double p = BpskBitErrorRate(9.0);
  // Q(x) from its own series: 0.5 erfc(x / sqrt 2), x = sqrt(2 snr).
  const double snr = std::pow(10.0, 0.9);
  EXPECT_NEAR(p, 0.5 * std::erfc(std::sqrt(2 * snr) / std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(p, 3.3627e-5, 1e-8);
  const double ber = CountFlips(bits, AwgnTransmit(bits, 9.0, rng)) / static_cast<double>(n);
  EXPECT_LT(std::abs(ber - p), 3 * std::sqrt(p * (1 - p) / n));
}

TEST(ChannelSpec, ParseAndValidate) {
  EXPECT_EQ(ChannelSpec::Parse("lossless").kind, ChannelKind::kLossless);
  const ChannelSpec a = ChannelSpec::Parse("awgn:7.5");
  EXPECT_EQ(a.kind, ChannelKind::kAwgn);
  EXPECT_EQ(a.snr_db, 7.5);
  EXPECT_EQ(ChannelSpec::Parse(a.ToString()).snr_db, 7.5);
  EXPECT_THROW(ChannelSpec::Parse("awgn:"), std::invalid_argument);
  EXPECT_THROW(ChannelSpec::Parse("rayleigh"), std::invalid_argument);
  EXPECT_THROW(ChannelSpec::Awgn(NAN).Validate(), std::invalid_argument);
}

std::vector<RateQualityPoint> Curve() {
  return {{0.1, 0.30}, {0.2, 0.42}, {0.4, 0.51}, {0.8, 0.58}, {1.6, 0.62}};
}

TEST(BdMetric, IdenticalCurves) {
  EXPECT_NEAR(BdMetric(Curve(), Curve(), BdMode::kRate), 0.0, 1e-9);
  EXPECT_NEAR(BdMetric(Curve(), Curve(), BdMode::kQuality), 0.0, 1e-12);
}

TEST(BdMetric, DoubledRateIsPlusHundredPercent) {
  auto b = Curve();
  for (auto& p : b) p.rate *= 2;
  EXPECT_NEAR(BdMetric(Curve(), b, BdMode::kRate), 100.0, 0.1);
}

TEST(BdMetric, ConstantQualityOffset) {
  for (double delta : {0.01, -0.05, 0.2}) {
    auto b = Curve();
    for (auto& p : b) p.quality += delta;
    EXPECT_NEAR(BdMetric(Curve(), b, BdMode::kQuality), delta, 1e-6);
  }
}

TEST(BdMetric, Antisymmetric) {
  auto b = Curve();
  for (size_t i = 0; i < b.size(); ++i) {
    b[i].rate *= 1.3 + 0.05 * i;
    b[i].quality += 0.01 * i;
  }
  EXPECT_NEAR(BdMetric(Curve(), b, BdMode::kQuality), -BdMetric(b, Curve(), BdMode::kQuality),
              1e-12);
  const double ab = BdMetric(Curve(), b, BdMode::kRate) / 100;
  const double ba = BdMetric(b, Curve(), BdMode::kRate) / 100;
  EXPECT_NEAR((1 + ab) * (1 + ba), 1.0, 1e-9);
}

TEST(BdMetric, RejectsBadCurves) {
  auto far = Curve();
  for (auto& p : far) {
    p.rate *= 100;
    p.quality += 10;
  }
  EXPECT_THROW(BdMetric(Curve(), far, BdMode::kQuality), std::invalid_argument);
  EXPECT_THROW(BdMetric(Curve(), far, BdMode::kRate), std::invalid_argument);
  auto short_curve = Curve();
  short_curve.resize(3);
  EXPECT_THROW(BdMetric(Curve(), short_curve, BdMode::kQuality), std::invalid_argument);
  auto dup = Curve();
  dup[1].rate = dup[0].rate;
  EXPECT_THROW(BdMetric(Curve(), dup, BdMode::kQuality), std::invalid_argument);
}

TEST(BdMetric, CubicFitIsExactOnCubics) {
  const std::vector<double> x = {-1.0, -0.2, 0.5, 1.1, 2.0};
  std::vector<double> y;
  for (double v : x) y.push_back(0.5 - v + 0.25 * v * v - 0.125 * v * v * v);
  const auto c = FitCubic(x, y);
  EXPECT_NEAR(c[0], 0.5, 1e-10);
  EXPECT_NEAR(c[1], -1.0, 1e-10);
  EXPECT_NEAR(c[2], 0.25, 1e-10);
  EXPECT_NEAR(c[3], -0.125, 1e-10);
}

TEST(ExperimentConfig, TextRoundTrip) {
  ExperimentConfig c;
  c.seed = 77;
  c.scene = SmallScene(5);
  c.eval_scenes = 12;
  c.modes = {2, 4};
  c.channel = ChannelSpec::Awgn(6.0);
  c.weights.lambda = 0.5;
  c.agent.alpha = 3e-4;
  c.stage1.alternations = 9;
  c.out_dir = "/tmp/x";
  const ExperimentConfig d = ExperimentConfig::Parse(c.ToText());
  EXPECT_EQ(d.ToText(), c.ToText());
  EXPECT_EQ(d.seed, 77u);
  EXPECT_EQ(d.scene.num_classes, 5u);
  EXPECT_EQ(d.modes, (std::vector<size_t>{2, 4}));
  EXPECT_EQ(d.channel.snr_db, 6.0);
  EXPECT_EQ(d.agent.alpha, 3e-4);
  EXPECT_THROW(ExperimentConfig::Parse("no_such_key = 1\n"), std::invalid_argument);
}

TEST(ExperimentConfig, SceneSetsAreDisjointStreams) {
  ExperimentConfig c;
  c.scene = SmallScene();
  c.train_scenes = c.agent_scenes = c.eval_scenes = 3;
  const auto a = TrainingScenes(c), b = AgentScenes(c), e = EvaluationScenes(c);
  EXPECT_FALSE(a[0].image == b[0].image);
  EXPECT_FALSE(a[0].image == e[0].image);
  EXPECT_TRUE(TrainingScenes(c)[2].image == a[2].image);
}

struct HarnessFixture {
  SceneConfig scene = SmallScene();
  PrototypeSegmenter seg = PrototypeSegmenter::Fit(scene, 64);
  PerceptualExtractor ex{scene.height, scene.width};
  SemanticCriterion crit{seg, ex, {1.0, 10.0}, scene.num_classes};
  std::vector<SceneSample> data = GenerateDataset(RngStream(30, 2), scene, 100);
};

TEST(Harness, CompressDecompressRoundTrip) {
  HarnessFixture fx;
  const SemanticSystem sys = SemanticSystem::Create(fx.scene, 4, 31);
  const std::vector<int> levels = {2, 5, 3, 6};
  const SemanticBitstream s = CompressImage(sys, fx.data[0].image, fx.data[0].labels, levels);
  const Decompressed d = DecompressBitstream(sys, Deserialize(Serialize(s)));
  EXPECT_FALSE(d.corrupted);
  EXPECT_TRUE(d.labels == fx.data[0].labels);
  EXPECT_EQ(d.reconstruction.image.shape(), fx.data[0].image.shape());
  const SemanticSystem other = SemanticSystem::Create(fx.scene, 8, 31);
  EXPECT_THROW(DecompressBitstream(other, s), std::invalid_argument);
}

TEST(Harness, HighSnrMatchesLossless) {
  HarnessFixture fx;
  const SemanticSystem sys = SemanticSystem::Create(fx.scene, 4, 32);
  for (size_t i = 0; i < 5; ++i) {
    RngStream r1(32, i), r2(32, i);
    const std::vector<int> levels(4, 4);
    const ImageResult a = EvaluateImage(sys, fx.data[i], levels, fx.crit, fx.seg,
                                        ChannelSpec::Lossless(), r1);
    const ImageResult b = EvaluateImage(sys, fx.data[i], levels, fx.crit, fx.seg,
                                        ChannelSpec::Awgn(60.0), r2);
    EXPECT_EQ(a.bpp, b.bpp);
    EXPECT_EQ(a.miou, b.miou);
    EXPECT_EQ(a.psnr, b.psnr);
    EXPECT_EQ(a.report.composite, b.report.composite);
  }
}

TEST(Harness, FinestLevelCostsAtLeastCoarsest) {
  HarnessFixture fx;
  const SemanticSystem sys = SemanticSystem::Create(fx.scene, 8, 33);
  for (const SceneSample& s : fx.data) {
    RngStream r(33, 0);
    const double lo = EvaluateImage(sys, s, std::vector<int>(4, 1), fx.crit, fx.seg,
                                    ChannelSpec::Lossless(), r).bpp;
    const double hi = EvaluateImage(sys, s, std::vector<int>(4, 6), fx.crit, fx.seg,
                                    ChannelSpec::Lossless(), r).bpp;
    EXPECT_GE(hi, lo);
  }
}

TEST(Harness, RateGrowsWithChannelCount) {
  HarnessFixture fx;
  std::vector<SemanticSystem> systems;
  for (size_t n : {4, 8, 16}) systems.push_back(SemanticSystem::Create(fx.scene, n, 34));
  std::vector<std::vector<double>> bpp(3);
  for (size_t k = 0; k < 3; ++k) {
    for (const SceneSample& s : fx.data) {
      RngStream r(34, 0);
      bpp[k].push_back(EvaluateImage(systems[k], s, std::vector<int>(4, 3), fx.crit, fx.seg,
                                     ChannelSpec::Lossless(), r)
                           .bpp);
    }
  }
  // Paired differences between consecutive modes, mean above 3 standard errors.
  for (size_t k = 0; k + 1 < 3; ++k) {
    double sum = 0, sum2 = 0;
    const size_t n = bpp[k].size();
    for (size_t i = 0; i < n; ++i) {
      const double d = bpp[k + 1][i] - bpp[k][i];
      sum += d;
      sum2 += d * d;
    }
    const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_GT(mean, 3 * se) << "mode index " << k;
    EXPECT_GT(mean, 0.0);
  }
}

TEST(Harness, SweepIsDeterministic) {
  HarnessFixture fx;
  fx.data.resize(6);
  const SemanticSystem a = SemanticSystem::Create(fx.scene, 4, 35);
  const SemanticSystem b = SemanticSystem::Create(fx.scene, 8, 35);
  const std::vector<SweepInput> in = {{4, &a}, {8, &b}};
  auto run = [&] {
    std::ostringstream out;
    WriteCurveCsv(out, RunRdSweep(in, fx.data, fx.crit, fx.seg, ChannelSpec::Awgn(3.0), 35));
    return out.str();
  };
  const std::string first = run();
  EXPECT_EQ(first, run());
  EXPECT_EQ(first.substr(0, first.find('\n')),
            "mode,policy,bpp,file_bpp,miou,perceptual,psnr,ssim,frechet,composite");
  // Header plus (learned + 6 uniform) rows per mode.
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 1 + 2 * 7);
}

TEST(Harness, MissingCheckpointNamesTheMode) {
  const std::string dir =
      (std::filesystem::temp_directory_path() / "semcodec_harness_test").string();
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  SemanticSystem::Create(SmallScene(), 4, 36).Save(ModeCheckpointPath(dir, 4));
  EXPECT_EQ(LoadModeSystems(dir, {4}).size(), 1u);
  try {
    LoadModeSystems(dir, {4, 8});
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("n=8"), std::string::npos) << e.what();
  }
  std::filesystem::remove_all(dir);
}

TEST(Harness, CheckpointRoundTrip) {
  SemanticSystem sys = SemanticSystem::Create(SmallScene(), 4, 37);
  sys.stage = TrainingStage::kStage2;
  sys.frozen = true;
  const SemanticSystem back = SemanticSystem::FromCheckpoint(
      DeserializeCheckpoint(SerializeCheckpoint(sys.ToCheckpoint())));
  EXPECT_TRUE(back.encoder == sys.encoder);
  EXPECT_TRUE(back.head == sys.head);
  EXPECT_TRUE(back.decoder == sys.decoder);
  EXPECT_TRUE(back.discriminator == sys.discriminator);
  EXPECT_TRUE(back.policy == sys.policy);
  EXPECT_EQ(back.stage, TrainingStage::kStage2);
  EXPECT_TRUE(back.frozen);
  EXPECT_EQ(back.scene.height, 16u);
}

}  // namespace
}  // namespace semcodec
