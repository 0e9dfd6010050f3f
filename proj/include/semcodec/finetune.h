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

#ifndef SEMCODEC_FINETUNE_H_
#define SEMCODEC_FINETUNE_H_

#include <string>
#include <vector>

#include "semcodec/allocator.h"
#include "semcodec/training.h"

namespace semcodec {

struct Stage3Config {
  size_t iterations = 200;
  size_t batch = 4;
  // Learning rates of both earlier stages are multiplied by this factor.
  double rate_scale = 0.1;
  Stage1Config stage1;
  AgentConfig agent;
};

struct Stage3LogRow {
  size_t iteration;
  double loss_d;
  double loss_g;
  double perceptual;
  double classification;
  double G;  // mean return of the batch episodes
  double composite;
};

struct Stage3Result {
  std::vector<Stage3LogRow> log;
  // Mean greedy composite L over the training scenes.
  PolicyScore before;
  PolicyScore after;
};

// Joint fine-tuning. Each iteration samples one episode per batch scene from
// the current policy and takes a REINFORCE step on the policy, then one
// adversarial step on encoder, decoder and discriminator with the greedy
// levels the updated policy would deploy. Requires a system at Stage II or later; leaves it at Stage III.
Stage3Result FinetuneStage3(SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                            const SemanticCriterion& criterion, const Stage3Config& config,
                            const PerceptualExtractor& extractor);

void WriteStage3Log(const std::string& path, const std::vector<Stage3LogRow>& log);

}  // namespace semcodec

#endif  // SEMCODEC_FINETUNE_H_
