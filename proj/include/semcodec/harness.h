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

#ifndef SEMCODEC_HARNESS_H_
#define SEMCODEC_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semcodec/allocator.h"
#include "semcodec/bitstream.h"
#include "semcodec/channel.h"
#include "semcodec/criterion.h"
#include "semcodec/finetune.h"
#include "semcodec/system.h"
#include "semcodec/task_oracle.h"
#include "semcodec/training.h"

namespace semcodec {

// Everything a run depends on. Config text is "key = value"; scene keys
// (H, W, M, ...) are shared with SceneConfig.
struct ExperimentConfig {
  uint64_t seed = 1;
  SceneConfig scene;
  size_t train_scenes = 256;
  size_t agent_scenes = 64;
  size_t eval_scenes = 100;
  size_t channels = 8;
  std::vector<size_t> modes = {4, 8, 16};
  ChannelSpec channel;
  CriterionWeights weights;
  Stage1Config stage1;
  AgentConfig agent;
  Stage3Config stage3;
  std::string out_dir = ".";

  static ExperimentConfig Parse(std::string_view text);
  static ExperimentConfig Load(const std::string& path);
  std::string ToText() const;
};

// Seeded scene sets on disjoint streams of config.seed.
std::vector<SceneSample> TrainingScenes(const ExperimentConfig& config);
std::vector<SceneSample> AgentScenes(const ExperimentConfig& config);
std::vector<SceneSample> EvaluationScenes(const ExperimentConfig& config);

// Encoder side: features, concepts at `levels`, label map -> bitstream.
SemanticBitstream CompressImage(const SemanticSystem& sys, const Tensor& image,
                                const LabelMap& labels, const std::vector<int>& levels);

struct Decompressed {
  LabelMap labels;
  Reconstruction reconstruction;
  bool corrupted = false;
};
// Throws std::invalid_argument if the stream does not match the system.
Decompressed DecompressBitstream(const SemanticSystem& sys, const SemanticBitstream& stream);

struct ImageResult {
  double bpp = 0.0;       // psi of the sent stream
  double file_bpp = 0.0;  // whole container
  double miou = 0.0;      // oracle segmentation of the output vs ground truth
  double psnr = 0.0;
  double ssim = 0.0;
  CriterionReport report;
  std::vector<double> descriptor;
  bool corrupted = false;
};

// Codes one scene at `levels`, sends it over `channel` and scores the
// output. `rng` drives the channel noise only.
ImageResult EvaluateImage(const SemanticSystem& sys, const SceneSample& scene,
                          const std::vector<int>& levels, const SemanticCriterion& criterion,
                          const PrototypeSegmenter& segmenter, const ChannelSpec& channel,
                          RngStream& rng);

struct CurvePoint {
  size_t mode = 0;     // channels n
  std::string policy;  // "learned" or "uniform-q"
  double bpp = 0.0;
  double file_bpp = 0.0;
  double miou = 0.0;
  double perceptual = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  double frechet = 0.0;
  double composite = 0.0;
};

struct SweepInput {
  size_t mode;
  const SemanticSystem* system;
};

// For every mode and every policy (learned, then uniform 1..Q) codes all
// scenes and averages. Image i uses channel stream Fork(i) of `seed`, so
// every policy sees the same noise draws.
std::vector<CurvePoint> RunRdSweep(const std::vector<SweepInput>& systems,
                                   const std::vector<SceneSample>& scenes,
                                   const SemanticCriterion& criterion,
                                   const PrototypeSegmenter& segmenter,
                                   const ChannelSpec& channel, uint64_t seed);

// Mean oracle mIoU of the learned policy's output over `scenes`.
double MeanOracleMiou(const SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                      const SemanticCriterion& criterion, const PrototypeSegmenter& segmenter,
                      const ChannelSpec& channel, uint64_t seed);

std::string ModeCheckpointPath(const std::string& dir, size_t mode);
// Loads one system per mode; throws std::runtime_error naming the first
// mode whose checkpoint is missing.
std::vector<std::pair<size_t, SemanticSystem>> LoadModeSystems(const std::string& dir,
                                                               const std::vector<size_t>& modes);

void WriteCurveCsv(std::ostream& out, const std::vector<CurvePoint>& points);

}  // namespace semcodec

#endif  // SEMCODEC_HARNESS_H_
