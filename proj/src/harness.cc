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

#include "semcodec/harness.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "semcodec/codec.h"
#include "semcodec/kv_config.h"

namespace semcodec {

namespace {

constexpr uint64_t kTrainStream = 0x7A1;
constexpr uint64_t kAgentStream = 0xA9E;
constexpr uint64_t kEvalStream = 0xE7A;
constexpr uint64_t kChannelStream = 0xC4A;

std::vector<size_t> ParseModes(const std::string& text) {
  std::vector<size_t> modes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || v <= 0 || v > 255) {
      throw std::invalid_argument("bad mode '" + item + "' in modes list");
    }
    modes.push_back(static_cast<size_t>(v));
  }
  if (modes.empty()) throw std::invalid_argument("modes list is empty");
  return modes;
}

size_t GetSize(const KeyValueConfig& kv, const std::string& key, size_t fallback) {
  const int64_t v = kv.GetInt(key, static_cast<int64_t>(fallback));
  if (v < 0) throw std::invalid_argument(key + " must be non-negative");
  return static_cast<size_t>(v);
}

}  // namespace

ExperimentConfig ExperimentConfig::Parse(std::string_view text) {
  const KeyValueConfig kv = KeyValueConfig::Parse(text);
  static constexpr std::string_view kSceneKeys[] = {
      "H", "W", "M", "palette_seed", "sky_band", "road_band", "object_probability",
      "texture_noise"};
  kv.RejectUnknown({"H", "W", "M", "palette_seed", "sky_band", "road_band",
                    "object_probability", "texture_noise", "seed", "train_scenes",
                    "agent_scenes", "eval_scenes", "channels", "modes", "channel", "lambda", "eta",
                    "stage1_alternations", "stage1_batch", "stage1_lr", "lambda1", "lambda2",
                    "agent_epochs", "agent_episodes", "gamma", "alpha", "baseline",
                    "stage3_iterations", "out_dir"});
  ExperimentConfig c;
  std::ostringstream scene_text;
  for (std::string_view key : kSceneKeys) {
    const std::string k(key);
    if (kv.Has(k)) scene_text << k << " = " << kv.GetString(k, "") << "\n";
  }
  c.scene = SceneConfig::Parse(scene_text.str());
  c.seed = static_cast<uint64_t>(kv.GetInt("seed", static_cast<int64_t>(c.seed)));
  c.train_scenes = GetSize(kv, "train_scenes", c.train_scenes);
  c.agent_scenes = GetSize(kv, "agent_scenes", c.agent_scenes);
  c.eval_scenes = GetSize(kv, "eval_scenes", c.eval_scenes);
  c.channels = GetSize(kv, "channels", c.channels);
  if (kv.Has("modes")) c.modes = ParseModes(kv.GetString("modes", ""));
  if (kv.Has("channel")) c.channel = ChannelSpec::Parse(kv.GetString("channel", ""));
  c.weights.lambda = kv.GetDouble("lambda", c.weights.lambda);
  c.weights.eta = kv.GetDouble("eta", c.weights.eta);
  c.weights.Validate();
  c.stage1.alternations = GetSize(kv, "stage1_alternations", c.stage1.alternations);
  c.stage1.batch = GetSize(kv, "stage1_batch", c.stage1.batch);
  c.stage1.adam.learning_rate = kv.GetDouble("stage1_lr", c.stage1.adam.learning_rate);
  c.stage1.lambda1 = kv.GetDouble("lambda1", c.stage1.lambda1);
  c.stage1.lambda2 = kv.GetDouble("lambda2", c.stage1.lambda2);
  c.agent.epochs = GetSize(kv, "agent_epochs", c.agent.epochs);
  c.agent.episodes_per_epoch = GetSize(kv, "agent_episodes", c.agent.episodes_per_epoch);
  c.agent.gamma = kv.GetDouble("gamma", c.agent.gamma);
  c.agent.alpha = kv.GetDouble("alpha", c.agent.alpha);
  c.agent.use_baseline = kv.GetBool("baseline", c.agent.use_baseline);
  c.agent.seed = c.seed;
  c.stage3.iterations = GetSize(kv, "stage3_iterations", c.stage3.iterations);
  c.stage3.stage1 = c.stage1;
  c.stage3.agent = c.agent;
  c.out_dir = kv.GetString("out_dir", c.out_dir);
  if (c.channels == 0) throw std::invalid_argument("channels must be positive");
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return Parse(text.str());
}

std::string ExperimentConfig::ToText() const {
  std::ostringstream out;
  out.precision(17);
  out << scene.ToText() << "seed = " << seed << "\ntrain_scenes = " << train_scenes
      << "\nagent_scenes = " << agent_scenes << "\neval_scenes = " << eval_scenes
      << "\nchannels = " << channels << "\nmodes = ";
  for (size_t i = 0; i < modes.size(); ++i) out << (i ? "," : "") << modes[i];
  out << "\nchannel = " << channel.ToString() << "\nlambda = " << weights.lambda
      << "\neta = " << weights.eta << "\nstage1_alternations = " << stage1.alternations
      << "\nstage1_batch = " << stage1.batch << "\nstage1_lr = " << stage1.adam.learning_rate
      << "\nlambda1 = " << stage1.lambda1 << "\nlambda2 = " << stage1.lambda2
      << "\nagent_epochs = " << agent.epochs << "\nagent_episodes = " << agent.episodes_per_epoch
      << "\ngamma = " << agent.gamma << "\nalpha = " << agent.alpha
      << "\nbaseline = " << (agent.use_baseline ? 1 : 0)
      << "\nstage3_iterations = " << stage3.iterations << "\nout_dir = " << out_dir << "\n";
  return out.str();
}

std::vector<SceneSample> TrainingScenes(const ExperimentConfig& config) {
  return GenerateDataset(RngStream(config.seed, kTrainStream), config.scene, config.train_scenes);
}

std::vector<SceneSample> AgentScenes(const ExperimentConfig& config) {
  return GenerateDataset(RngStream(config.seed, kAgentStream), config.scene, config.agent_scenes);
}

std::vector<SceneSample> EvaluationScenes(const ExperimentConfig& config) {
  return GenerateDataset(RngStream(config.seed, kEvalStream), config.scene, config.eval_scenes);
}

SemanticBitstream CompressImage(const SemanticSystem& sys, const Tensor& image,
                                const LabelMap& labels, const std::vector<int>& levels) {
  return EncodeScene(sys.Encode(image), labels, levels, sys.num_classes());
}

Decompressed DecompressBitstream(const SemanticSystem& sys, const SemanticBitstream& stream) {
  if (stream.num_classes != sys.num_classes() || stream.channels != sys.channels() ||
      stream.height != sys.grid_height() || stream.width != sys.grid_width()) {
    throw std::invalid_argument("bitstream geometry does not match the system");
  }
  DecodedScene d = DecodeScene(stream);
  Decompressed out;
  out.reconstruction = Decode(d.features, d.down_labels, sys.decoder, sys.decoder_config);
  out.labels = std::move(d.labels);
  out.corrupted = d.corrupted;
  return out;
}

ImageResult EvaluateImage(const SemanticSystem& sys, const SceneSample& scene,
                          const std::vector<int>& levels, const SemanticCriterion& criterion,
                          const PrototypeSegmenter& segmenter, const ChannelSpec& channel,
                          RngStream& rng) {
  const SemanticBitstream sent = CompressImage(sys, scene.image, scene.labels, levels);
  const RateBreakdown rate = ComputeRate(sent);
  const Decompressed got = DecompressBitstream(sys, TransmitBitstream(sent, channel, rng));
  const Tensor& x = got.reconstruction.image;
  ImageResult r;
  r.bpp = rate.psi;
  r.file_bpp = rate.file_bpp;
  r.miou = MeanIou(segmenter.Segment(x), scene.labels, sys.num_classes());
  const PixelMetrics pm = ComputePixelMetrics(scene.image, x);
  r.psnr = pm.psnr;
  r.ssim = pm.ssim;
  r.report = criterion.Evaluate(criterion.Prepare(scene.image), x, rate.psi);
  r.descriptor = criterion.extractor().Descriptor(x);
  r.corrupted = got.corrupted;
  return r;
}

namespace {

CurvePoint Average(size_t mode, std::string policy, const std::vector<ImageResult>& results,
                   const std::vector<std::vector<double>>& source_descriptors) {
  CurvePoint p;
  p.mode = mode;
  p.policy = std::move(policy);
  std::vector<std::vector<double>> desc;
  for (const ImageResult& r : results) {
    p.bpp += r.bpp;
    p.file_bpp += r.file_bpp;
    p.miou += r.miou;
    p.perceptual += r.report.perceptual;
    p.psnr += r.psnr;
    p.ssim += r.ssim;
    p.composite += r.report.composite;
    desc.push_back(r.descriptor);
  }
  const double n = static_cast<double>(results.size());
  for (double* v : {&p.bpp, &p.file_bpp, &p.miou, &p.perceptual, &p.psnr, &p.ssim, &p.composite}) {
    *v /= n;
  }
  p.frechet = FrechetDistance(source_descriptors, desc);
  return p;
}

}  // namespace

std::vector<CurvePoint> RunRdSweep(const std::vector<SweepInput>& systems,
                                   const std::vector<SceneSample>& scenes,
                                   const SemanticCriterion& criterion,
                                   const PrototypeSegmenter& segmenter,
                                   const ChannelSpec& channel, uint64_t seed) {
  if (scenes.size() < 2) throw std::invalid_argument("sweep needs at least 2 scenes");
  std::vector<std::vector<double>> source_desc;
  for (const SceneSample& s : scenes) source_desc.push_back(criterion.extractor().Descriptor(s.image));
  const RngStream base(seed, kChannelStream);
  std::vector<CurvePoint> out;
  for (const SweepInput& in : systems) {
    if (in.system == nullptr) {
      throw std::invalid_argument("no system for mode n=" + std::to_string(in.mode));
    }
    const SemanticSystem& sys = *in.system;
    const int Q = sys.policy_config.num_levels;
    for (int variant = 0; variant <= Q; ++variant) {
      std::vector<ImageResult> results;
      for (size_t i = 0; i < scenes.size(); ++i) {
        RngStream rng = base.Fork(i);
        const std::vector<int> levels =
            variant == 0 ? GreedyLevels(sys, sys.Encode(scenes[i].image), scenes[i].labels)
                         : std::vector<int>(sys.num_classes(), variant);
        results.push_back(EvaluateImage(sys, scenes[i], levels, criterion, segmenter, channel, rng));
      }
      out.push_back(Average(in.mode,
                            variant == 0 ? "learned" : "uniform-" + std::to_string(variant),
                            results, source_desc));
    }
  }
  return out;
}

double MeanOracleMiou(const SemanticSystem& sys, const std::vector<SceneSample>& scenes,
                      const SemanticCriterion& criterion, const PrototypeSegmenter& segmenter,
                      const ChannelSpec& channel, uint64_t seed) {
  if (scenes.empty()) throw std::invalid_argument("need scenes");
  const RngStream base(seed, kChannelStream);
  double total = 0.0;
  for (size_t i = 0; i < scenes.size(); ++i) {
    RngStream rng = base.Fork(i);
    const std::vector<int> levels = GreedyLevels(sys, sys.Encode(scenes[i].image), scenes[i].labels);
    total += EvaluateImage(sys, scenes[i], levels, criterion, segmenter, channel, rng).miou;
  }
  return total / static_cast<double>(scenes.size());
}

std::string ModeCheckpointPath(const std::string& dir, size_t mode) {
  return (std::filesystem::path(dir) / ("system_n" + std::to_string(mode) + ".ck")).string();
}

std::vector<std::pair<size_t, SemanticSystem>> LoadModeSystems(const std::string& dir,
                                                               const std::vector<size_t>& modes) {
  std::vector<std::pair<size_t, SemanticSystem>> out;
  for (size_t mode : modes) {
    const std::string path = ModeCheckpointPath(dir, mode);
    if (!std::filesystem::exists(path)) {
      throw std::runtime_error("missing checkpoint for mode n=" + std::to_string(mode) + ": " +
                               path);
    }
    SemanticSystem sys = SemanticSystem::Load(path);
    if (sys.channels() != mode) {
      throw std::runtime_error("checkpoint " + path + " has n=" + std::to_string(sys.channels()) +
                               ", expected mode n=" + std::to_string(mode));
    }
    out.emplace_back(mode, std::move(sys));
  }
  return out;
}

void WriteCurveCsv(std::ostream& out, const std::vector<CurvePoint>& points) {
  const auto old = out.precision(10);
  out << "mode,policy,bpp,file_bpp,miou,perceptual,psnr,ssim,frechet,composite\n";
  for (const CurvePoint& p : points) {
    out << p.mode << ',' << p.policy << ',' << p.bpp << ',' << p.file_bpp << ',' << p.miou << ','
        << p.perceptual << ',' << p.psnr << ',' << p.ssim << ',' << p.frechet << ','
        << p.composite << '\n';
  }
  out.precision(old);
}

}  // namespace semcodec
