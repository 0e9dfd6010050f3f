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

#include "semcodec/training.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "semcodec/codec.h"

namespace semcodec {

Reconstruction ReconstructAtLevels(const SemanticSystem& sys, const Tensor& image,
                                   const LabelMap& labels, const std::vector<int>& levels) {
  if (levels.size() != sys.num_classes()) throw std::invalid_argument("need one level per class");
  const Tensor f = sys.Encode(image);
  const std::vector<SemanticMask> masks = ExtractAllMasks(labels, sys.num_classes());
  Tensor fq(f.shape());
  for (size_t m = 0; m < masks.size(); ++m) {
    if (masks[m].empty()) continue;
    fq = Add(fq, QuantizeConceptFeatures(f, masks[m].down, levels[m]));
  }
  return Decode(fq, DownscaleLabels(labels), sys.decoder, sys.decoder_config);
}

Var QuantizeCellsGraph(Graph& g, Var cells, const LabelMap& down_labels,
                       const std::vector<int>& levels, double softness) {
  const Tensor& f = g.value(cells);
  const size_t n = f.cols();
  if (down_labels.size() != f.rows()) throw std::invalid_argument("label grid mismatch");
  Tensor value(f.shape()), derivative(f.shape());
  std::vector<QuantizerSpec> specs;
  for (int level : levels) specs.push_back(QuantizerSpec::ForLevel(level, softness));
  Tensor one = Tensor::Matrix(1, 1);
  for (size_t cell = 0; cell < f.rows(); ++cell) {
    const QuantizerSpec& spec = specs.at(static_cast<size_t>(down_labels[cell] - 1));
    for (size_t c = 0; c < n; ++c) {
      const double x = f[cell * n + c];
      const double clipped = std::clamp(x, -1.0, 1.0);
      value[cell * n + c] = spec.centers()[spec.NearestIndex(clipped)];
      one[0] = clipped;
      derivative[cell * n + c] =
          (x < -1.0 || x > 1.0) ? 0.0 : QuantizeSoftDerivative(one, spec)[0];
    }
  }
  return g.Pointwise(cells, std::move(value), std::move(derivative));
}

namespace {

void CheckFinite(double v, const char* what, size_t step) {
  if (!std::isfinite(v)) {
    throw std::runtime_error(std::string("training diverged: ") + what +
                             " is not finite at step " + std::to_string(step));
  }
}

}  // namespace

Stage1LogRow RunAdversarialStep(SemanticSystem& sys, const std::vector<const SceneSample*>& batch,
                                const std::vector<std::vector<int>>& levels,
                                const Stage1Config& config, const PerceptualExtractor& extractor,
                                const AdversarialStep& opt) {
  const size_t H = sys.scene.height, W = sys.scene.width, M = sys.num_classes();
  const DiscriminatorLayout layout = sys.MakeLayout();
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  Stage1LogRow row{};

  // Discriminator step against the current generator.
  {
    Graph g;
    std::vector<Var> real, fake;
    for (size_t i = 0; i < batch.size(); ++i) {
      const SceneSample& s = *batch[i];
      const Tensor onehot = OneHotCells(s.labels, M);
      const Reconstruction r = ReconstructAtLevels(sys, s.image, s.labels, levels[i]);
      real.push_back(DiscriminatorGraph(g, g.Constant(ImageToPixels(s.image)), onehot,
                                        ParamRef(sys.discriminator), layout));
      fake.push_back(DiscriminatorGraph(g, g.Constant(ImageToPixels(r.fused)), onehot,
                                        ParamRef(sys.discriminator), layout));
    }
    Var loss = HingeDiscriminatorGraph(g, real, fake);
    row.loss_d = g.scalar(loss);
    CheckFinite(row.loss_d, "L_D", 0);
    sys.discriminator.ZeroGrad();
    g.Backward(loss);
    opt.discriminator->Step(sys.discriminator);
  }
  if (!config.update_generator) return row;

  // Generator step: encoder, class head and decoder.
  sys.encoder.ZeroGrad();
  sys.head.ZeroGrad();
  sys.decoder.ZeroGrad();
  for (size_t i = 0; i < batch.size(); ++i) {
    const SceneSample& s = *batch[i];
    const LabelMap down = DownscaleLabels(s.labels);
    const std::vector<SemanticMask> masks = ExtractAllMasks(s.labels, M);
    Graph g;
    Var f = EncodeFeaturesGraph(g, g.Constant(ImageToPatches(s.image)), ParamRef(sys.encoder),
                                sys.encoder_config);
    Var lc = FeatureClassLossGraph(g, f, masks, ParamRef(sys.head));
    Var fq = QuantizeCellsGraph(g, f, down, levels[i], config.softness);
    DecoderVars dec = DecodeGraph(g, fq, down, ParamRef(sys.decoder), sys.decoder_config);
    Var pixels = PatchesToPixelsGraph(g, dec.fused, H, W);
    Var lp = extractor.LossGraph(g, pixels, extractor.Features(s.image));
    Var d = DiscriminatorGraph(g, pixels, OneHotCells(s.labels, M),
                               ParamRef(static_cast<const ParamBlock&>(sys.discriminator)),
                               layout);
    Var adv = g.Scale(d, -1.0);
    Var loss = g.Add(adv, g.Add(g.Scale(lp, config.lambda1), g.Scale(lc, config.lambda2)));
    loss = g.Scale(loss, inv_b);
    row.loss_g += g.scalar(adv) * inv_b;
    row.perceptual += g.scalar(lp) * inv_b;
    row.classification += g.scalar(lc) * inv_b;
    CheckFinite(g.scalar(loss), "generator loss", 0);
    g.Backward(loss);
  }
  opt.encoder->Step(sys.encoder);
  opt.head->Step(sys.head);
  opt.decoder->Step(sys.decoder);
  return row;
}

double MeanPerceptualLoss(const SemanticSystem& sys, const std::vector<SceneSample>& data,
                          int level, const PerceptualExtractor& extractor) {
  if (data.empty()) return 0.0;
  const std::vector<int> levels(sys.num_classes(), level);
  double total = 0.0;
  for (const SceneSample& s : data) {
    const Reconstruction r = ReconstructAtLevels(sys, s.image, s.labels, levels);
    total += extractor.Loss(s.image, r.image);
  }
  return total / static_cast<double>(data.size());
}

Stage1Result TrainStage1(SemanticSystem& sys, const std::vector<SceneSample>& data,
                         const Stage1Config& config, const PerceptualExtractor& extractor) {
  if (data.empty()) throw std::invalid_argument("Stage I needs training scenes");
  if (sys.frozen) throw std::logic_error("Stage I cannot train a frozen system");
  if (config.batch == 0) throw std::invalid_argument("batch must be positive");
  const std::vector<SceneSample> eval(
      data.begin(), data.begin() + static_cast<long>(std::min(config.eval_scenes, data.size())));
  Stage1Result result;
  result.initial_perceptual = MeanPerceptualLoss(sys, eval, config.level, extractor);

  Adam enc(config.adam), head(config.adam), dec(config.adam), disc(config.adam);
  const AdversarialStep opt{&enc, &head, &dec, &disc};
  const std::vector<std::vector<int>> levels(config.batch,
                                             std::vector<int>(sys.num_classes(), config.level));
  size_t cursor = 0;
  for (size_t t = 0; t < config.alternations; ++t) {
    std::vector<const SceneSample*> batch;
    for (size_t i = 0; i < config.batch; ++i) batch.push_back(&data[cursor++ % data.size()]);
    Stage1LogRow row = RunAdversarialStep(sys, batch, levels, config, extractor, opt);
    row.step = t;
    for (double v : {row.loss_d, row.loss_g, row.perceptual, row.classification}) {
      CheckFinite(v, "loss", t);
    }
    result.log.push_back(row);
  }
  result.final_perceptual = MeanPerceptualLoss(sys, eval, config.level, extractor);
  if (config.update_generator) sys.stage = TrainingStage::kStage1;
  return result;
}

void WriteStage1Log(const std::string& path, const std::vector<Stage1LogRow>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(10);
  out << "step,loss_d,loss_g,perceptual,classification\n";
  for (const Stage1LogRow& r : log) {
    out << r.step << ',' << r.loss_d << ',' << r.loss_g << ',' << r.perceptual << ','
        << r.classification << '\n';
  }
}

}  // namespace semcodec
