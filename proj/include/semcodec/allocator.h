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

#ifndef SEMCODEC_ALLOCATOR_H_
#define SEMCODEC_ALLOCATOR_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semcodec/criterion.h"
#include "semcodec/policy.h"
#include "semcodec/scene.h"
#include "semcodec/system.h"

namespace semcodec {

// One coding episode over the M concepts of a scene. Concept m is coded at
// step m; concepts not coded yet stay at level 1. The environment is
// deterministic: the reconstruction depends only on the levels chosen.
class EpisodeEnv {
 public:
  // Copies the system's decoder; `criterion` must outlive the environment.
  EpisodeEnv(const SemanticSystem& sys, const SceneSample& scene,
             const SemanticCriterion& criterion);

  size_t num_steps() const { return states_.size(); }
  int num_levels() const { return num_levels_; }
  // state^(m), m in [1, M].
  const AllocState& state(int m) const { return states_.at(static_cast<size_t>(m - 1)); }

  // Back to x^(0): every concept at level 1.
  void Reset();

  struct StepResult {
    CriterionReport report;  // composite uses the absolute rate
    double loss;             // L^(m): rate term relative to psi(x^(0))
    double reward;           // L^(m-1) - L^(m)
  };
  // Codes concept current_step() at `level` and advances.
  StepResult Step(int level);

  int current_step() const { return step_; }
  bool done() const { return static_cast<size_t>(step_) > num_steps(); }
  const std::vector<int>& levels() const { return levels_; }
  const Tensor& reconstruction() const { return recon_; }
  const CriterionReport& initial_report() const { return initial_report_; }
  double initial_loss() const { return initial_report_.composite - weights().lambda * psi0_; }

  // psi for arbitrary concept levels (same accounting as the bitstream).
  double Rate(const std::vector<int>& levels) const;
  size_t PayloadBits(int m, int level) const;
  size_t label_bits() const { return label_bits_; }
  const CriterionWeights& weights() const { return criterion_->weights(); }

 private:
  Tensor DecodeAt(const std::vector<int>& levels) const;

  const SemanticCriterion* criterion_;
  ParamBlock decoder_;
  DecoderConfig decoder_config_;
  SceneSample scene_;
  LabelMap down_;
  SemanticCriterion::Reference reference_;
  std::vector<AllocState> states_;
  // quantized_[m][q-1]: concept m's dequantized features at level q.
  std::vector<std::vector<Tensor>> quantized_;
  std::vector<std::vector<size_t>> payload_bits_;
  size_t label_bits_ = 0;
  int num_levels_;

  std::vector<int> levels_;
  int step_ = 1;
  Tensor recon_;
  double psi0_ = 0.0;
  double last_loss_ = 0.0;
  CriterionReport initial_report_;
};

struct TrajectoryStep {
  int step;
  Tensor input;  // policy input row
  DropoutMasks dropout;
  int action;
  double log_prob;
  double reward;  // r^(m+1)
  double loss;    // L^(m)
  CriterionReport report;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  CriterionReport initial;
  double initial_loss = 0.0;
  double gamma = 1.0;
  double G = 0.0;
  // ParamHash of the policy that produced the log-probabilities; 0 when no
  // policy was involved.
  uint64_t theta_hash = 0;

  std::vector<double> rewards() const;
  std::vector<int> actions() const;
  const CriterionReport& final_report() const { return steps.back().report; }
};

// G = sum_{m=1}^{M} gamma^m r^(m+1).
double DiscountedReturn(std::span<const double> rewards, double gamma);

enum class ActionMode { kSample, kGreedy };

// Rolls out the policy. kSample draws actions (and dropout masks) from
// `rng`; kGreedy takes the most probable level without dropout.
Trajectory RunEpisode(EpisodeEnv& env, const ParamBlock& policy, const PolicyConfig& config,
                      double gamma, ActionMode mode, RngStream& rng);
// Plays `actions` and records their log-probabilities under `policy`.
Trajectory ReplayEpisode(EpisodeEnv& env, const ParamBlock& policy, const PolicyConfig& config,
                         double gamma, const std::vector<int>& actions);
// Plays `actions` without a policy.
Trajectory RunFixedEpisode(EpisodeEnv& env, const std::vector<int>& actions, double gamma);

class StaleTrajectoryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// (G - baseline) * sum_m grad log pi(a_m | s_m), flattened in parameter
// order. Throws StaleTrajectoryError if `policy` is not the policy that
// produced the trajectory.
std::vector<double> ReinforceGradient(const Trajectory& trajectory, const ParamBlock& policy,
                                      const PolicyConfig& config, double baseline = 0.0);

// theta <- theta + alpha * gradient.
void UpdatePolicy(ParamBlock& policy, std::span<const double> gradient, double alpha);

struct AgentConfig {
  size_t epochs = 5;
  size_t episodes_per_epoch = 40;
  double gamma = 0.99;
  double alpha = 1e-5;
  // Moving-average baseline subtracted from G; off by default.
  bool use_baseline = false;
  double baseline_decay = 0.9;
  uint64_t seed = 1;
};

struct AgentLogRow {
  size_t epoch;
  size_t episode;
  double G;
  double rate;
  double semantic;
  double perceptual;
  double composite;
};

struct AgentResult {
  std::vector<AgentLogRow> log;
  std::vector<double> epoch_mean_return;
};

// Algorithm 2. Episode e uses scene e mod N and rng stream Fork(e) of the
// seed. Requires a frozen system past Stage I; leaves it at Stage II.
AgentResult TrainAgent(SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                       const SemanticCriterion& criterion, const AgentConfig& config);

void WriteAgentLog(const std::string& path, const std::vector<AgentLogRow>& log);

// Policy states s_1..s_M of one image; they depend only on the features
// and label map, not on earlier actions.
std::vector<AllocState> MakeStates(const Tensor& features, const LabelMap& labels,
                                   size_t num_classes);

// Levels the policy picks greedily for an image.
std::vector<int> GreedyLevels(const SemanticSystem& sys, const Tensor& features,
                              const LabelMap& labels);

struct PolicyScore {
  double composite = 0.0;
  double rate = 0.0;
  double semantic = 0.0;
  double perceptual = 0.0;
};

// Mean final criterion over `envs` with greedy actions of `policy`.
PolicyScore EvaluatePolicy(std::vector<EpisodeEnv>& envs, const ParamBlock& policy,
                           const PolicyConfig& config);
// Same with every concept at `level`.
PolicyScore EvaluateUniform(std::vector<EpisodeEnv>& envs, int level);

std::vector<EpisodeEnv> MakeEnvs(const SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                                 const SemanticCriterion& criterion);

// Exact J = sum over all Q^M action sequences of T_pi * G.
struct ExactObjective {
  double J = 0.0;
  std::vector<std::vector<int>> trajectories;
  std::vector<double> probabilities;
  std::vector<double> returns;
};
inline constexpr size_t kMaxEnumeratedTrajectories = 4096;
// Throws std::invalid_argument when Q^M exceeds 4096.
ExactObjective ExactJ(EpisodeEnv& env, const ParamBlock& policy, const PolicyConfig& config,
                      double gamma);
// J for known returns (the environment does not depend on theta).
double ExactJFromReturns(const EpisodeEnv& env, const std::vector<std::vector<int>>& trajectories,
                         const std::vector<double>& returns, const ParamBlock& policy,
                         const PolicyConfig& config);

}  // namespace semcodec

#endif  // SEMCODEC_ALLOCATOR_H_
