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

#ifndef SEMCODEC_SYSTEM_H_
#define SEMCODEC_SYSTEM_H_

#include <cstdint>
#include <string>

#include "semcodec/checkpoint.h"
#include "semcodec/decoder.h"
#include "semcodec/encoder.h"
#include "semcodec/policy.h"
#include "semcodec/scene.h"

namespace semcodec {

// Training progress; each stage requires the previous one.
enum class TrainingStage : uint8_t {
  kUntrained = 0,
  kStage1 = 1,  // encoder/decoder/discriminator
  kStage2 = 2,  // bit allocation agent
  kStage3 = 3,  // joint finetuning
};

const char* StageName(TrainingStage stage);

// All parameters of the coding system.
struct SemanticSystem {
  SceneConfig scene;
  EncoderConfig encoder_config;
  DecoderConfig decoder_config;
  PolicyConfig policy_config;

  ParamBlock encoder;
  ParamBlock head;
  ParamBlock decoder;
  ParamBlock discriminator;
  ParamBlock policy;

  TrainingStage stage = TrainingStage::kUntrained;
  // Encoder and decoder locked while the agent trains.
  bool frozen = false;

  // Fresh parameters; every block draws from its own stream of `seed`.
  static SemanticSystem Create(const SceneConfig& scene, size_t channels, uint64_t seed,
                               const PolicyConfig& policy = {});

  size_t grid_height() const { return scene.height / kPatchSize; }
  size_t grid_width() const { return scene.width / kPatchSize; }
  size_t num_classes() const { return scene.num_classes; }
  size_t channels() const { return encoder_config.channels; }
  DiscriminatorLayout MakeLayout() const {
    return MakeDiscriminatorLayout(scene.height, scene.width, scene.num_classes);
  }

  Tensor Encode(const Tensor& image) const { return EncodeFeatures(image, encoder, encoder_config); }

  Checkpoint ToCheckpoint() const;
  static SemanticSystem FromCheckpoint(const Checkpoint& ckpt);
  void Save(const std::string& path) const;
  static SemanticSystem Load(const std::string& path);
};

}  // namespace semcodec

#endif  // SEMCODEC_SYSTEM_H_
