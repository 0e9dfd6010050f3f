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

#include "semcodec/allocator.h"

#include <cmath>
#include <fstream>

#include "semcodec/codec.h"
#include "semcodec/decoder.h"
#include "semcodec/label_rle.h"

namespace semcodec {

EpisodeEnv::EpisodeEnv(const SemanticSystem& sys, const SceneSample& scene,
                       const SemanticCriterion& criterion)
    : criterion_(&criterion),
      decoder_(sys.decoder),
      decoder_config_(sys.decoder_config),
      scene_(scene),
      num_levels_(sys.policy_config.num_levels) {
  const size_t M = sys.num_classes();
  down_ = DownscaleLabels(scene.labels);
  reference_ = criterion.Prepare(scene.image);
  const Tensor f = sys.Encode(scene.image);
  const std::vector<SemanticMask> masks = ExtractAllMasks(scene.labels, M);
  quantized_.resize(M);
  payload_bits_.resize(M);
  states_ = MakeStates(f, scene.labels, M);
  for (size_t m = 0; m < M; ++m) {
    for (int q = 1; q <= num_levels_; ++q) {
      quantized_[m].push_back(QuantizeConceptFeatures(f, masks[m].down, q));
      payload_bits_[m].push_back(EncodeConcept(f, masks[m].down, q).payload.size());
    }
  }
  label_bits_ = LabelMapBitLength(RunLengthEncode(scene.labels).size());
  Reset();
}

std::vector<AllocState> MakeStates(const Tensor& features, const LabelMap& labels,
                                   size_t num_classes) {
  std::vector<AllocState> states;
  for (SemanticMask& mask : ExtractAllMasks(labels, num_classes)) {
    AllocState st;
    st.step = static_cast<int>(states.size()) + 1;
    st.num_steps = num_classes;
    st.features = DecomposeFeatures(features, mask).features;
    st.mask = std::move(mask);
    states.push_back(std::move(st));
  }
  return states;
}

std::vector<int> GreedyLevels(const SemanticSystem& sys, const Tensor& features,
                              const LabelMap& labels) {
  std::vector<int> levels;
  for (const AllocState& st : MakeStates(features, labels, sys.num_classes())) {
    levels.push_back(GreedyAction(PolicyForward(PolicyInput(st), sys.policy, sys.policy_config)));
  }
  return levels;
}

double EpisodeEnv::Rate(const std::vector<int>& levels) const {
  size_t bits = label_bits_;
  for (size_t m = 0; m < levels.size(); ++m) bits += PayloadBits(static_cast<int>(m) + 1, levels[m]);
  return static_cast<double>(bits) / static_cast<double>(scene_.labels.size());
}

size_t EpisodeEnv::PayloadBits(int m, int level) const {
  if (level < 1 || level > num_levels_) {
    throw std::invalid_argument("level " + std::to_string(level) + " outside [1, " +
                                std::to_string(num_levels_) + "]");
  }
  return payload_bits_.at(static_cast<size_t>(m - 1))[static_cast<size_t>(level - 1)];
}

Tensor EpisodeEnv::DecodeAt(const std::vector<int>& levels) const {
  Tensor fq(states_[0].features.shape());
  for (size_t m = 0; m < levels.size(); ++m) {
    fq = Add(fq, quantized_[m][static_cast<size_t>(levels[m] - 1)]);
  }
  return Decode(fq, down_, decoder_, decoder_config_).image;
}

void EpisodeEnv::Reset() {
  levels_.assign(num_steps(), 1);
  step_ = 1;
  recon_ = DecodeAt(levels_);
  psi0_ = Rate(levels_);
  initial_report_ = criterion_->Evaluate(reference_, recon_, psi0_);
  last_loss_ = initial_loss();
}

EpisodeEnv::StepResult EpisodeEnv::Step(int level) {
  if (done()) throw std::logic_error("episode already finished");
  if (level < 1 || level > num_levels_) {
    throw std::invalid_argument("level " + std::to_string(level) + " outside [1, " +
                                std::to_string(num_levels_) + "]");
  }
  const size_t m = static_cast<size_t>(step_ - 1);
  levels_[m] = level;
  // Only concept m's region is replaced; the rest of x^(m-1) is kept.
  const Tensor full = DecodeAt(levels_);
  const std::vector<uint8_t>& region = states_[m].mask.full;
  const size_t P = region.size();
  for (size_t c = 0; c < 3; ++c)
    for (size_t p = 0; p < P; ++p)
      if (region[p]) recon_[c * P + p] = full[c * P + p];
  StepResult r;
  r.report = criterion_->Evaluate(reference_, recon_, Rate(levels_));
  r.loss = r.report.composite - weights().lambda * psi0_;
  r.reward = last_loss_ - r.loss;
  last_loss_ = r.loss;
  ++step_;
  return r;
}

std::vector<double> Trajectory::rewards() const {
  std::vector<double> r;
  for (const auto& s : steps) r.push_back(s.reward);
  return r;
}

std::vector<int> Trajectory::actions() const {
  std::vector<int> a;
  for (const auto& s : steps) a.push_back(s.action);
  return a;
}

double DiscountedReturn(std::span<const double> rewards, double gamma) {
  double g = 0.0, w = gamma;
  for (double r : rewards) {
    g += w * r;
    w *= gamma;
  }
  return g;
}

namespace {

// Shared rollout. `choose` returns the action and fills log-prob/dropout.
template <typename Choose>
Trajectory Rollout(EpisodeEnv& env, double gamma, uint64_t hash, Choose choose) {
  env.Reset();
  Trajectory t;
  t.initial = env.initial_report();
  t.initial_loss = env.initial_loss();
  t.gamma = gamma;
  t.theta_hash = hash;
  while (!env.done()) {
    TrajectoryStep s{};
    s.step = env.current_step();
    s.action = choose(env.state(s.step), s);
    const EpisodeEnv::StepResult r = env.Step(s.action);
    s.reward = r.reward;
    s.loss = r.loss;
    s.report = r.report;
    t.steps.push_back(std::move(s));
  }
  const std::vector<double> rewards = t.rewards();
  t.G = DiscountedReturn(rewards, gamma);
  return t;
}

}  // namespace

Trajectory RunEpisode(EpisodeEnv& env, const ParamBlock& policy, const PolicyConfig& config,
                      double gamma, ActionMode mode, RngStream& rng) {
  return Rollout(env, gamma, ParamHash(policy), [&](const AllocState& st, TrajectoryStep& s) {
    s.input = PolicyInput(st);
    if (mode == ActionMode::kGreedy) {
      const std::vector<double> p = PolicyForward(s.input, policy, config);
      const int a = GreedyAction(p);
      s.log_prob = std::log(p[static_cast<size_t>(a - 1)]);
      return a;
    }
    s.dropout = DrawDropout(config, rng);
    Graph g;
    const Tensor& lp = g.value(PolicyLogProbGraph(g, s.input, ParamRef(policy), config, &s.dropout));
    std::vector<double> p(lp.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = std::exp(lp[i]);
    const SampledAction a = SampleAction(p, rng);
    s.log_prob = lp[static_cast<size_t>(a.level - 1)];
    return a.level;
  });
}

Trajectory ReplayEpisode(EpisodeEnv& env, const ParamBlock& policy, const PolicyConfig& config,
                         double gamma, const std::vector<int>& actions) {
  if (actions.size() != env.num_steps()) throw std::invalid_argument("need one action per step");
  return Rollout(env, gamma, ParamHash(policy), [&](const AllocState& st, TrajectoryStep& s) {
    s.input = PolicyInput(st);
    const std::vector<double> p = PolicyForward(s.input, policy, config);
    const int a = actions[static_cast<size_t>(s.step - 1)];
    s.log_prob = std::log(p.at(static_cast<size_t>(a - 1)));
    return a;
  });
}

Trajectory RunFixedEpisode(EpisodeEnv& env, const std::vector<int>& actions, double gamma) {
  if (actions.size() != env.num_steps()) throw std::invalid_argument("need one action per step");
  return Rollout(env, gamma, 0, [&](const AllocState&, TrajectoryStep& s) {
    return actions[static_cast<size_t>(s.step - 1)];
  });
}

std::vector<double> ReinforceGradient(const Trajectory& trajectory, const ParamBlock& policy,
                                      const PolicyConfig& config, double baseline) {
  if (trajectory.theta_hash == 0 || trajectory.theta_hash != ParamHash(policy)) {
    throw StaleTrajectoryError("trajectory log-probabilities were not recorded under this policy");
  }
  ParamBlock work = policy;
  work.ZeroGrad();
  for (const TrajectoryStep& s : trajectory.steps) {
    Graph g;
    Var lp = PolicyLogProbGraph(g, s.input, ParamRef(work), config, &s.dropout);
    Var chosen = g.Element(lp, static_cast<size_t>(s.action - 1));
    if (std::abs(g.scalar(chosen) - s.log_prob) > 1e-9 * std::max(1.0, std::abs(s.log_prob))) {
      throw StaleTrajectoryError("recorded log-probability does not match the policy");
    }
    g.Backward(chosen);
  }
  std::vector<double> grad = work.FlatGrads();
  const double scale = trajectory.G - baseline;
  for (double& v : grad) v *= scale;
  return grad;
}

void UpdatePolicy(ParamBlock& policy, std::span<const double> gradient, double alpha) {
  std::vector<double> theta = policy.FlatValues();
  if (gradient.size() != theta.size()) {
    throw std::invalid_argument("gradient has " + std::to_string(gradient.size()) +
                                " entries, policy has " + std::to_string(theta.size()));
  }
  for (size_t i = 0; i < theta.size(); ++i) theta[i] += alpha * gradient[i];
  policy.SetFlatValues(theta);
}

std::vector<EpisodeEnv> MakeEnvs(const SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                                 const SemanticCriterion& criterion) {
  std::vector<EpisodeEnv> envs;
  envs.reserve(scenes.size());
  for (const SceneSample& s : scenes) envs.emplace_back(sys, s, criterion);
  return envs;
}

AgentResult TrainAgent(SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                       const SemanticCriterion& criterion, const AgentConfig& config) {
  if (!sys.frozen) {
    throw std::logic_error("agent training requires a frozen encoder and decoder");
  }
  if (sys.stage < TrainingStage::kStage1) {
    throw std::logic_error("agent training requires Stage I parameters");
  }
  if (scenes.empty()) throw std::invalid_argument("agent training needs scenes");
  std::vector<EpisodeEnv> envs = MakeEnvs(sys, scenes, criterion);
  const RngStream base(config.seed, 0xA6E);
  AgentResult result;
  double baseline = 0.0;
  bool have_baseline = false;
  size_t episode = 0;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double sum_g = 0.0;
    for (size_t e = 0; e < config.episodes_per_epoch; ++e, ++episode) {
      RngStream rng = base.Fork(episode);
      EpisodeEnv& env = envs[episode % envs.size()];
      const Trajectory t =
          RunEpisode(env, sys.policy, sys.policy_config, config.gamma, ActionMode::kSample, rng);
      const double b = config.use_baseline && have_baseline ? baseline : 0.0;
      const std::vector<double> grad = ReinforceGradient(t, sys.policy, sys.policy_config, b);
      UpdatePolicy(sys.policy, grad, config.alpha);
      if (config.use_baseline) {
        baseline = have_baseline
                       ? config.baseline_decay * baseline + (1.0 - config.baseline_decay) * t.G
                       : t.G;
        have_baseline = true;
      }
      const CriterionReport& f = t.final_report();
      result.log.push_back({epoch, episode, t.G, f.rate, f.semantic, f.perceptual, f.composite});
      sum_g += t.G;
    }
    result.epoch_mean_return.push_back(
        config.episodes_per_epoch ? sum_g / static_cast<double>(config.episodes_per_epoch) : 0.0);
  }
  sys.stage = std::max(sys.stage, TrainingStage::kStage2);
  return result;
}

void WriteAgentLog(const std::string& path, const std::vector<AgentLogRow>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(10);
  out << "epoch,episode,G,psi,L_S,L_P,L\n";
  for (const AgentLogRow& r : log) {
    out << r.epoch << ',' << r.episode << ',' << r.G << ',' << r.rate << ',' << r.semantic << ','
        << r.perceptual << ',' << r.composite << '\n';
  }
}

namespace {

PolicyScore Accumulate(const std::vector<Trajectory>& ts) {
  PolicyScore s;
  for (const Trajectory& t : ts) {
    const CriterionReport& f = t.final_report();
    s.composite += f.composite;
    s.rate += f.rate;
    s.semantic += f.semantic;
    s.perceptual += f.perceptual;
  }
  const double n = static_cast<double>(ts.size());
  if (n > 0) {
    s.composite /= n;
    s.rate /= n;
    s.semantic /= n;
    s.perceptual /= n;
  }
  return s;
}

}  // namespace

PolicyScore EvaluatePolicy(std::vector<EpisodeEnv>& envs, const ParamBlock& policy,
                           const PolicyConfig& config) {
  std::vector<Trajectory> ts;
  RngStream unused(0, 0);
  for (EpisodeEnv& env : envs) {
    ts.push_back(RunEpisode(env, policy, config, 1.0, ActionMode::kGreedy, unused));
  }
  return Accumulate(ts);
}

PolicyScore EvaluateUniform(std::vector<EpisodeEnv>& envs, int level) {
  std::vector<Trajectory> ts;
  for (EpisodeEnv& env : envs) {
    ts.push_back(RunFixedEpisode(env, std::vector<int>(env.num_steps(), level), 1.0));
  }
  return Accumulate(ts);
}

namespace {

std::vector<std::vector<int>> AllActionSequences(size_t steps, int levels) {
  double count = std::pow(static_cast<double>(levels), static_cast<double>(steps));
  if (count > static_cast<double>(kMaxEnumeratedTrajectories)) {
    throw std::invalid_argument("Q^M = " + std::to_string(static_cast<long long>(count)) +
                                " trajectories exceed the enumeration limit of 4096");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> cur(steps, 1);
  while (true) {
    out.push_back(cur);
    size_t i = steps;
    while (i > 0) {
      --i;
      if (cur[i] < levels) {
        ++cur[i];
        break;
      }
      cur[i] = 1;
      if (i == 0) return out;
    }
    if (steps == 0) return out;
  }
}

}  // namespace

double ExactJFromReturns(const EpisodeEnv& env, const std::vector<std::vector<int>>& trajectories,
                         const std::vector<double>& returns, const ParamBlock& policy,
                         const PolicyConfig& config) {
  // States do not depend on earlier actions, so pi(.|s_m) is computed once.
  std::vector<std::vector<double>> probs;
  for (size_t m = 1; m <= env.num_steps(); ++m) {
    probs.push_back(PolicyForward(env.state(static_cast<int>(m)), policy, config));
  }
  double J = 0.0;
  for (size_t k = 0; k < trajectories.size(); ++k) {
    double p = 1.0;
    for (size_t m = 0; m < trajectories[k].size(); ++m) {
      p *= probs[m][static_cast<size_t>(trajectories[k][m] - 1)];
    }
    J += p * returns[k];
  }
  return J;
}

ExactObjective ExactJ(EpisodeEnv& env, const ParamBlock& policy, const PolicyConfig& config,
                      double gamma) {
  ExactObjective out;
  out.trajectories = AllActionSequences(env.num_steps(), config.num_levels);
  std::vector<std::vector<double>> probs;
  for (size_t m = 1; m <= env.num_steps(); ++m) {
    probs.push_back(PolicyForward(env.state(static_cast<int>(m)), policy, config));
  }
  for (const std::vector<int>& actions : out.trajectories) {
    out.returns.push_back(RunFixedEpisode(env, actions, gamma).G);
    double p = 1.0;
    for (size_t m = 0; m < actions.size(); ++m) p *= probs[m][static_cast<size_t>(actions[m] - 1)];
    out.probabilities.push_back(p);
    out.J += p * out.returns.back();
  }
  return out;
}

}  // namespace semcodec
