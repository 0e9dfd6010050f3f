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

// Command-line front end: data generation, the three training stages,
// encode/decode, evaluation, sweeps and BD metrics.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "semcodec/bd_metric.h"
#include "semcodec/checkpoint.h"
#include "semcodec/harness.h"
#include "semcodec/image_io.h"

namespace semcodec {
namespace {

constexpr uint64_t kCliChannelStream = 0xC11;

struct Common {
  uint64_t seed = 0;
  bool has_seed = false;
  std::string config;
  std::string out;
};

void AddCommon(CLI::App* app, Common& c, bool out_required) {
  app->add_option("--seed", c.seed, "Random seed (overrides the config)")
      ->each([&c](const std::string&) { c.has_seed = true; });
  app->add_option("--config", c.config, "Experiment config file (key = value)")
      ->check(CLI::ExistingFile);
  auto* out = app->add_option("--out", c.out, "Output path");
  if (out_required) out->required();
}

ExperimentConfig LoadConfig(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::Load(c.config);
  if (c.has_seed) {
    cfg.seed = c.seed;
    cfg.agent.seed = c.seed;
    cfg.stage3.agent.seed = c.seed;
  }
  return cfg;
}

// Oracle, extractor and criterion for one scene geometry.
struct Evaluator {
  explicit Evaluator(const ExperimentConfig& cfg, const SceneConfig& scene)
      : segmenter(PrototypeSegmenter::Fit(scene)),
        extractor(scene.height, scene.width),
        criterion(segmenter, extractor, cfg.weights, scene.num_classes) {}
  PrototypeSegmenter segmenter;
  PerceptualExtractor extractor;
  SemanticCriterion criterion;
};

std::vector<int> ChooseLevels(const SemanticSystem& sys, const Tensor& image,
                              const LabelMap& labels, int level) {
  if (level == 0) return GreedyLevels(sys, sys.Encode(image), labels);
  return std::vector<int>(sys.num_classes(), level);
}

void CheckGeometry(const SemanticSystem& sys, const Tensor& image, const LabelMap& labels) {
  if (image.dim(1) != sys.scene.height || image.dim(2) != sys.scene.width ||
      labels.height() != sys.scene.height || labels.width() != sys.scene.width) {
    throw std::runtime_error("image is " + std::to_string(image.dim(2)) + "x" +
                             std::to_string(image.dim(1)) + ", system expects " +
                             std::to_string(sys.scene.width) + "x" +
                             std::to_string(sys.scene.height));
  }
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

nlohmann::json ReportJson(const CriterionReport& r) {
  return {{"rate", r.rate}, {"semantic", r.semantic}, {"perceptual", r.perceptual},
          {"composite", r.composite}};
}

std::vector<RateQualityPoint> ReadCurve(const std::string& path, const std::string& metric,
                                        const std::string& select) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + " is empty");
  const std::vector<std::string> header = split(line);
  auto column = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error(path + " has no column '" + name + "'");
  };
  const size_t rate_col = column("bpp"), q_col = column(metric);
  size_t sel_col = 0;
  std::string sel_value;
  if (!select.empty()) {
    const size_t eq = select.find('=');
    if (eq == std::string::npos) throw std::runtime_error("selection must be column=value");
    sel_col = column(select.substr(0, eq));
    sel_value = select.substr(eq + 1);
  }
  std::vector<RateQualityPoint> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) throw std::runtime_error("ragged row in " + path);
    if (!select.empty() && cells[sel_col] != sel_value) continue;
    pts.push_back({std::stod(cells[rate_col]), std::stod(cells[q_col])});
  }
  return pts;
}

int Main(int argc, char** argv) {
  CLI::App app{"Semantic image codec with learned rate allocation"};
  app.require_subcommand(1);

  Common gen_c, s1_c, agent_c, ft_c, enc_c, dec_c, eval_c, sweep_c, bd_c;

  auto* gen = app.add_subcommand("gen-data", "Write seeded scenes as PPM/PGM pairs");
  AddCommon(gen, gen_c, true);
  std::string gen_set = "eval";
  long gen_count = -1;
  gen->add_option("--set", gen_set, "Scene set")->check(CLI::IsMember({"train", "agent", "eval"}));
  gen->add_option("--count", gen_count, "Number of scenes (default from config)");

  auto* s1 = app.add_subcommand("train-stage1", "Train encoder and decoder (Stage I)");
  AddCommon(s1, s1_c, true);
  long s1_channels = -1, s1_alternations = -1;
  s1->add_option("--channels", s1_channels, "Feature channels n");
  s1->add_option("--alternations", s1_alternations, "D/G alternations");

  auto* agent = app.add_subcommand("train-agent", "Train the allocation policy (Stage II)");
  AddCommon(agent, agent_c, true);
  std::string agent_sys;
  agent->add_option("--system", agent_sys, "Stage I checkpoint")->required()->check(CLI::ExistingFile);

  auto* ft = app.add_subcommand("finetune", "Joint fine-tuning (Stage III)");
  AddCommon(ft, ft_c, true);
  std::string ft_sys;
  ft->add_option("--system", ft_sys, "Stage II checkpoint")->required()->check(CLI::ExistingFile);

  auto* enc = app.add_subcommand("encode", "Encode a PPM image and PGM label map");
  AddCommon(enc, enc_c, true);
  std::string enc_sys, enc_image, enc_labels;
  int enc_level = 0;
  enc->add_option("--system", enc_sys, "Checkpoint")->required()->check(CLI::ExistingFile);
  enc->add_option("--image", enc_image, "Input PPM")->required()->check(CLI::ExistingFile);
  enc->add_option("--labels", enc_labels, "Input PGM label map")->required()->check(CLI::ExistingFile);
  enc->add_option("--level", enc_level, "Uniform level 1..6, 0 for the learned policy")
      ->check(CLI::Range(0, 6));

  auto* dec = app.add_subcommand("decode", "Decode a bitstream to PPM");
  AddCommon(dec, dec_c, true);
  std::string dec_sys, dec_in, dec_labels_out, dec_channel = "lossless";
  dec->add_option("--system", dec_sys, "Checkpoint")->required()->check(CLI::ExistingFile);
  dec->add_option("--in", dec_in, "Input .rlsc bitstream")->required()->check(CLI::ExistingFile);
  dec->add_option("--labels-out", dec_labels_out, "Also write the decoded label map (PGM)");
  dec->add_option("--channel", dec_channel, "lossless or awgn:<snr dB>");

  auto* ev = app.add_subcommand("eval", "Print the criterion report of one image as JSON");
  AddCommon(ev, eval_c, false);
  std::string ev_sys, ev_image, ev_labels, ev_channel = "lossless";
  int ev_level = 0;
  ev->add_option("--system", ev_sys, "Checkpoint")->required()->check(CLI::ExistingFile);
  ev->add_option("--image", ev_image, "Input PPM")->required()->check(CLI::ExistingFile);
  ev->add_option("--labels", ev_labels, "Input PGM label map")->required()->check(CLI::ExistingFile);
  ev->add_option("--level", ev_level, "Uniform level 1..6, 0 for the learned policy")
      ->check(CLI::Range(0, 6));
  ev->add_option("--channel", ev_channel, "lossless or awgn:<snr dB>");

  auto* sw = app.add_subcommand("sweep", "Rate-quality sweep over modes and policies (CSV)");
  AddCommon(sw, sweep_c, false);
  std::string sw_dir, sw_channel;
  sw->add_option("--dir", sw_dir, "Directory with system_n<mode>.ck (default out_dir)");
  sw->add_option("--channel", sw_channel, "lossless or awgn:<snr dB> (default from config)");

  auto* bd = app.add_subcommand("bd", "Bjontegaard deltas between two curve CSVs");
  AddCommon(bd, bd_c, false);
  std::string bd_anchor, bd_test, bd_metric = "miou", bd_anchor_sel, bd_test_sel;
  bd->add_option("--anchor", bd_anchor, "Anchor curve CSV")->required()->check(CLI::ExistingFile);
  bd->add_option("--test", bd_test, "Test curve CSV")->required()->check(CLI::ExistingFile);
  bd->add_option("--metric", bd_metric, "Quality column");
  bd->add_option("--anchor-select", bd_anchor_sel, "Row filter column=value for the anchor");
  bd->add_option("--test-select", bd_test_sel, "Row filter column=value for the test curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      ExperimentConfig cfg = LoadConfig(gen_c);
      std::vector<SceneSample> scenes;
      if (gen_count >= 0) {
        cfg.train_scenes = cfg.agent_scenes = cfg.eval_scenes = static_cast<size_t>(gen_count);
      }
      if (gen_set == "train") scenes = TrainingScenes(cfg);
      else if (gen_set == "agent") scenes = AgentScenes(cfg);
      else scenes = EvaluationScenes(cfg);
      std::filesystem::create_directories(gen_c.out);
      for (size_t i = 0; i < scenes.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "scene_%04zu", i);
        const std::filesystem::path base = std::filesystem::path(gen_c.out) / name;
        WritePpm(base.string() + ".ppm", scenes[i].image);
        WritePgm(base.string() + ".pgm", scenes[i].labels);
      }
      std::cout << "wrote " << scenes.size() << " scenes to " << gen_c.out << "\n";
    } else if (s1->parsed()) {
      ExperimentConfig cfg = LoadConfig(s1_c);
      if (s1_alternations >= 0) cfg.stage1.alternations = static_cast<size_t>(s1_alternations);
      const size_t n = s1_channels > 0 ? static_cast<size_t>(s1_channels) : cfg.channels;
      SemanticSystem sys = SemanticSystem::Create(cfg.scene, n, cfg.seed);
      const PerceptualExtractor extractor(cfg.scene.height, cfg.scene.width);
      const Stage1Result r = TrainStage1(sys, TrainingScenes(cfg), cfg.stage1, extractor);
      sys.Save(s1_c.out);
      WriteStage1Log(s1_c.out + ".log.csv", r.log);
      std::cout << "L_P " << r.initial_perceptual << " -> " << r.final_perceptual << "\n";
    } else if (agent->parsed()) {
      const ExperimentConfig cfg = LoadConfig(agent_c);
      SemanticSystem sys = SemanticSystem::Load(agent_sys);
      sys.frozen = true;
      const Evaluator e(cfg, sys.scene);
      const AgentResult r = TrainAgent(sys, AgentScenes(cfg), e.criterion, cfg.agent);
      sys.Save(agent_c.out);
      WriteAgentLog(agent_c.out + ".log.csv", r.log);
      std::cout << "mean return per epoch:";
      for (double g : r.epoch_mean_return) std::cout << ' ' << g;
      std::cout << "\n";
    } else if (ft->parsed()) {
      const ExperimentConfig cfg = LoadConfig(ft_c);
      SemanticSystem sys = SemanticSystem::Load(ft_sys);
      const Evaluator e(cfg, sys.scene);
      const Stage3Result r =
          FinetuneStage3(sys, AgentScenes(cfg), e.criterion, cfg.stage3, e.extractor);
      sys.Save(ft_c.out);
      WriteStage3Log(ft_c.out + ".log.csv", r.log);
      std::cout << "L " << r.before.composite << " -> " << r.after.composite << "\n";
    } else if (enc->parsed()) {
      LoadConfig(enc_c);
      const SemanticSystem sys = SemanticSystem::Load(enc_sys);
      const Tensor image = ReadPpm(enc_image);
      const LabelMap labels = ReadPgm(enc_labels);
      CheckGeometry(sys, image, labels);
      const std::vector<int> levels = ChooseLevels(sys, image, labels, enc_level);
      const SemanticBitstream stream = CompressImage(sys, image, labels, levels);
      const std::vector<uint8_t> bytes = Serialize(stream);
      WriteFileBytes(enc_c.out, bytes);
      const RateBreakdown rate = ComputeRate(stream);
      const nlohmann::json j = {{"levels", levels},
                                {"payload_bits", rate.payload_bits},
                                {"label_bits", rate.label_bits},
                                {"overhead_bits", rate.overhead_bits},
                                {"psi", rate.psi},
                                {"file_bpp", rate.file_bpp},
                                {"bytes", bytes.size()}};
      std::cout << j.dump(2) << "\n";
    } else if (dec->parsed()) {
      const ExperimentConfig cfg = LoadConfig(dec_c);
      const SemanticSystem sys = SemanticSystem::Load(dec_sys);
      const SemanticBitstream stream = Deserialize(ReadFileBytes(dec_in));
      RngStream rng(cfg.seed, kCliChannelStream);
      const Decompressed d =
          DecompressBitstream(sys, TransmitBitstream(stream, ChannelSpec::Parse(dec_channel), rng));
      WritePpm(dec_c.out, d.reconstruction.image);
      if (!dec_labels_out.empty()) WritePgm(dec_labels_out, d.labels);
      if (d.corrupted) std::cerr << "warning: corrupted segments were repaired\n";
    } else if (ev->parsed()) {
      const ExperimentConfig cfg = LoadConfig(eval_c);
      const SemanticSystem sys = SemanticSystem::Load(ev_sys);
      SceneSample scene{ReadPpm(ev_image), ReadPgm(ev_labels)};
      CheckGeometry(sys, scene.image, scene.labels);
      const Evaluator e(cfg, sys.scene);
      RngStream rng(cfg.seed, kCliChannelStream);
      const ImageResult r =
          EvaluateImage(sys, scene, ChooseLevels(sys, scene.image, scene.labels, ev_level),
                        e.criterion, e.segmenter, ChannelSpec::Parse(ev_channel), rng);
      nlohmann::json j = ReportJson(r.report);
      j["bpp"] = r.bpp;
      j["file_bpp"] = r.file_bpp;
      j["miou"] = r.miou;
      j["psnr"] = r.psnr;
      j["ssim"] = r.ssim;
      j["corrupted"] = r.corrupted;
      WriteText(eval_c.out, j.dump(2) + "\n");
    } else if (sw->parsed()) {
      ExperimentConfig cfg = LoadConfig(sweep_c);
      if (!sw_channel.empty()) cfg.channel = ChannelSpec::Parse(sw_channel);
      const auto systems = LoadModeSystems(sw_dir.empty() ? cfg.out_dir : sw_dir, cfg.modes);
      const Evaluator e(cfg, systems.front().second.scene);
      std::vector<SweepInput> inputs;
      for (const auto& [mode, sys] : systems) inputs.push_back({mode, &sys});
      const std::vector<CurvePoint> pts = RunRdSweep(inputs, EvaluationScenes(cfg), e.criterion,
                                                     e.segmenter, cfg.channel, cfg.seed);
      std::ostringstream csv;
      WriteCurveCsv(csv, pts);
      WriteText(sweep_c.out, csv.str());
    } else if (bd->parsed()) {
      LoadConfig(bd_c);
      const auto a = ReadCurve(bd_anchor, bd_metric, bd_anchor_sel);
      const auto b = ReadCurve(bd_test, bd_metric, bd_test_sel);
      std::ostringstream csv;
      csv.precision(10);
      csv << "metric,value\n"
          << "bd-rate," << BdMetric(a, b, BdMode::kRate) << "\n"
          << "bd-" << bd_metric << "," << BdMetric(a, b, BdMode::kQuality) << "\n";
      WriteText(bd_c.out, csv.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace semcodec

int main(int argc, char** argv) { return semcodec::Main(argc, argv); }
