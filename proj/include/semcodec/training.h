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

#ifndef SEMCODEC_TRAINING_H_
#define SEMCODEC_TRAINING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "semcodec/adam.h"
#include "semcodec/decoder.h"
#include "semcodec/perceptual.h"
#include "semcodec/scene.h"
#include "semcodec/system.h"

namespace semcodec {

// Reconstruction of `image` with concept m quantized at levels[m-1]
// (hard quantization, lossless channel).
Reconstruction ReconstructAtLevels(const SemanticSystem& sys, const Tensor& image,
                                   const LabelMap& labels, const std::vector<int>& levels);

// Straight-through quantization of feature cells [cells x n] where the cells
// of class m use levels[m-1].
Var QuantizeCellsGraph(Graph& g, Var cells, const LabelMap& down_labels,
                       const std::vector<int>& levels, double softness = kTrainingSoftness);

struct Stage1Config {
  size_t alternations = 200;
  size_t batch = 4;
  AdamConfig adam;  // lr 2e-4, beta1 0.5, beta2 0.999
  double lambda1 = 10.0;  // perceptual weight in the generator objective
  double lambda2 = 1.0;   // feature classification weight
  int level = kNumLevels;
  double softness = kTrainingSoftness;
  // Scenes whose L_P is tracked before and after training.
  size_t eval_scenes = 16;
  // When false only the discriminator is updated.
  bool update_generator = true;
};

struct Stage1LogRow {
  size_t step;
  double loss_d;
  double loss_g;  // adversarial term -E[D]
  double perceptual;
  double classification;
};

struct Stage1Result {
  double initial_perceptual = 0.0;
  double final_perceptual = 0.0;
  std::vector<Stage1LogRow> log;
};

// Alternating hinge-GAN training of encoder, decoder and discriminator. Each
// alternation takes one Adam step on D, then one on the encoder, the class
// head and the decoder, over a batch of scenes cycled in dataset order.
// Throws std::runtime_error if a loss becomes non-finite.
Stage1Result TrainStage1(SemanticSystem& sys, const std::vector<SceneSample>& data,
                         const Stage1Config& config, const PerceptualExtractor& extractor);

// Mean L_P of reconstructions at a uniform level over `data`.
double MeanPerceptualLoss(const SemanticSystem& sys, const std::vector<SceneSample>& data,
                          int level, const PerceptualExtractor& extractor);

void WriteStage1Log(const std::string& path, const std::vector<Stage1LogRow>& log);

// One discriminator step and one generator step on `batch` with per-scene
// concept levels. Shared by Stage I and Stage III.
struct AdversarialStep {
  Adam* encoder;
  Adam* head;
  Adam* decoder;
  Adam* discriminator;
};
Stage1LogRow RunAdversarialStep(SemanticSystem& sys, const std::vector<const SceneSample*>& batch,
                                const std::vector<std::vector<int>>& levels,
                                const Stage1Config& config, const PerceptualExtractor& extractor,
                                const AdversarialStep& opt);

}  // namespace semcodec

#endif  // SEMCODEC_TRAINING_H_
