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

#include "semcodec/system.h"

#include <sstream>
#include <stdexcept>

#include "semcodec/bit_io.h"
#include "semcodec/kv_config.h"

namespace semcodec {

const char* StageName(TrainingStage stage) {
  switch (stage) {
    case TrainingStage::kUntrained:
      return "untrained";
    case TrainingStage::kStage1:
      return "stage1";
    case TrainingStage::kStage2:
      return "stage2";
    case TrainingStage::kStage3:
      return "stage3";
  }
  return "unknown";
}

SemanticSystem SemanticSystem::Create(const SceneConfig& scene, size_t channels, uint64_t seed,
                                      const PolicyConfig& policy) {
  scene.Validate();
  if (channels == 0 || channels > 0xFFFF) throw std::invalid_argument("bad channel count");
  SemanticSystem s;
  s.scene = scene;
  s.encoder_config.channels = channels;
  s.decoder_config.channels = channels;
  s.decoder_config.num_classes = scene.num_classes;
  s.policy_config = policy;
  RngStream enc_rng(seed, 0xE0), head_rng(seed, 0xE1), dec_rng(seed, 0xD0),
      disc_rng(seed, 0xD1), pol_rng(seed, 0xA0);
  s.encoder = MakeEncoderParams(s.encoder_config, enc_rng);
  s.head = MakeClassHeadParams(channels, scene.num_classes, head_rng);
  s.decoder = MakeDecoderParams(s.decoder_config, dec_rng);
  s.discriminator = MakeDiscriminatorParams(s.MakeLayout(), disc_rng);
  const size_t cells = s.grid_height() * s.grid_width();
  s.policy = MakePolicyParams(PolicyInputSize(channels, cells, scene.num_classes), policy,
                              pol_rng);
  return s;
}

namespace {

std::string DoubleText(double v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

}  // namespace

Checkpoint SemanticSystem::ToCheckpoint() const {
  Checkpoint c;
  c.metadata = {
      {"scene", scene.ToText()},
      {"channels", std::to_string(encoder_config.channels)},
      {"feature_scale", DoubleText(encoder_config.feature_scale)},
      {"decoder_hidden", std::to_string(decoder_config.hidden)},
      {"policy_hidden1", std::to_string(policy_config.hidden1)},
      {"policy_hidden2", std::to_string(policy_config.hidden2)},
      {"policy_levels", std::to_string(policy_config.num_levels)},
      {"policy_dropout", DoubleText(policy_config.dropout)},
      {"stage", std::to_string(static_cast<int>(stage))},
      {"frozen", frozen ? "1" : "0"},
  };
  c.blocks = {{"encoder", encoder},
              {"head", head},
              {"decoder", decoder},
              {"discriminator", discriminator},
              {"policy", policy}};
  return c;
}

SemanticSystem SemanticSystem::FromCheckpoint(const Checkpoint& ckpt) {
  auto meta = [&](const char* key) -> const std::string& {
    const std::string* v = ckpt.FindMeta(key);
    if (!v) throw std::runtime_error(std::string("checkpoint lacks metadata '") + key + "'");
    return *v;
  };
  auto block = [&](const char* name) -> const ParamBlock& {
    const ParamBlock* b = ckpt.FindBlock(name);
    if (!b) throw std::runtime_error(std::string("checkpoint lacks block '") + name + "'");
    return *b;
  };
  SemanticSystem s;
  s.scene = SceneConfig::Parse(meta("scene"));
  s.encoder_config.channels = std::stoul(meta("channels"));
  s.encoder_config.feature_scale = std::stod(meta("feature_scale"));
  s.decoder_config.channels = s.encoder_config.channels;
  s.decoder_config.num_classes = s.scene.num_classes;
  s.decoder_config.hidden = std::stoul(meta("decoder_hidden"));
  s.policy_config.hidden1 = std::stoul(meta("policy_hidden1"));
  s.policy_config.hidden2 = std::stoul(meta("policy_hidden2"));
  s.policy_config.num_levels = std::stoi(meta("policy_levels"));
  s.policy_config.dropout = std::stod(meta("policy_dropout"));
  const int stage = std::stoi(meta("stage"));
  if (stage < 0 || stage > 3) throw std::runtime_error("checkpoint has invalid stage");
  s.stage = static_cast<TrainingStage>(stage);
  s.frozen = meta("frozen") == "1";
  s.encoder = block("encoder");
  s.head = block("head");
  s.decoder = block("decoder");
  s.discriminator = block("discriminator");
  s.policy = block("policy");
  for (ParamBlock* b : {&s.encoder, &s.head, &s.decoder, &s.discriminator, &s.policy}) {
    b->ZeroGrad();
  }
  return s;
}

void SemanticSystem::Save(const std::string& path) const {
  WriteFileBytes(path, SerializeCheckpoint(ToCheckpoint()));
}

SemanticSystem SemanticSystem::Load(const std::string& path) {
  return FromCheckpoint(DeserializeCheckpoint(ReadFileBytes(path)));
}

}  // namespace semcodec
