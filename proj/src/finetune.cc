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

#include "semcodec/finetune.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace semcodec {

Stage3Result FinetuneStage3(SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                            const SemanticCriterion& criterion, const Stage3Config& config,
                            const PerceptualExtractor& extractor) {
  if (sys.stage < TrainingStage::kStage2) {
    throw std::logic_error(std::string("Stage III needs Stage II parameters, system is at ") +
                           StageName(sys.stage));
  }
  if (scenes.empty()) throw std::invalid_argument("Stage III needs training scenes");
  if (config.batch == 0) throw std::invalid_argument("batch must be positive");

  Stage3Result result;
  {
    std::vector<EpisodeEnv> envs = MakeEnvs(sys, scenes, criterion);
    result.before = EvaluatePolicy(envs, sys.policy, sys.policy_config);
  }
  Stage1Config s1 = config.stage1;
  s1.adam.learning_rate *= config.rate_scale;
  const double alpha = config.agent.alpha * config.rate_scale;
  Adam enc(s1.adam), head(s1.adam), dec(s1.adam), disc(s1.adam);
  const AdversarialStep opt{&enc, &head, &dec, &disc};
  const RngStream base(config.agent.seed, 0x5E3);

  size_t cursor = 0;
  for (size_t it = 0; it < config.iterations; ++it) {
    std::vector<const SceneSample*> batch;
    std::vector<std::vector<int>> levels;
    double sum_g = 0.0, sum_l = 0.0;
    for (size_t i = 0; i < config.batch; ++i, ++cursor) {
      const SceneSample& scene = scenes[cursor % scenes.size()];
      RngStream rng = base.Fork(cursor);
      EpisodeEnv env(sys, scene, criterion);
      const Trajectory t = RunEpisode(env, sys.policy, sys.policy_config, config.agent.gamma,
                                      ActionMode::kSample, rng);
      UpdatePolicy(sys.policy, ReinforceGradient(t, sys.policy, sys.policy_config), alpha);
      batch.push_back(&scene);
      levels.push_back(RunEpisode(env, sys.policy, sys.policy_config, config.agent.gamma,
                                  ActionMode::kGreedy, rng)
                           .actions());
      sum_g += t.G;
      sum_l += t.final_report().composite;
    }
    const Stage1LogRow row = RunAdversarialStep(sys, batch, levels, s1, extractor, opt);
    for (double v : {row.loss_d, row.loss_g, row.perceptual, row.classification}) {
      if (!std::isfinite(v)) {
        throw std::runtime_error("non-finite loss at Stage III iteration " + std::to_string(it));
      }
    }
    const double n = static_cast<double>(config.batch);
    result.log.push_back({it, row.loss_d, row.loss_g, row.perceptual, row.classification,
                          sum_g / n, sum_l / n});
  }
  std::vector<EpisodeEnv> envs = MakeEnvs(sys, scenes, criterion);
  result.after = EvaluatePolicy(envs, sys.policy, sys.policy_config);
  sys.stage = TrainingStage::kStage3;
  return result;
}

void WriteStage3Log(const std::string& path, const std::vector<Stage3LogRow>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(10);
  out << "iteration,loss_d,loss_g,perceptual,classification,G,L\n";
  for (const Stage3LogRow& r : log) {
    out << r.iteration << ',' << r.loss_d << ',' << r.loss_g << ',' << r.perceptual << ','
        << r.classification << ',' << r.G << ',' << r.composite << '\n';
  }
}

}  // namespace semcodec
