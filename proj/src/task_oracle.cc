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

#include "semcodec/task_oracle.h"

#include <limits>
#include <stdexcept>

namespace semcodec {

PrototypeSegmenter::PrototypeSegmenter(std::vector<Color> prototypes, TaskKind kind)
    : prototypes_(std::move(prototypes)), kind_(kind) {
  if (prototypes_.empty()) throw std::invalid_argument("segmenter needs prototypes");
  if (kind_ == TaskKind::kClassification) {
    throw std::invalid_argument("segmenter cannot be a classification oracle");
  }
}

PrototypeSegmenter PrototypeSegmenter::Fit(const SceneConfig& config, size_t num_samples,
                                           uint64_t seed) {
  const size_t M = config.num_classes;
  std::vector<Color> sum(M, Color{0, 0, 0});
  std::vector<size_t> count(M, 0);
  const RngStream base(seed, 0xF17);
  for (size_t i = 0; i < num_samples; ++i) {
    RngStream rng = base.Fork(i);
    const SceneSample s = GenerateScene(rng, config);
    for (size_t y = 0; y < config.height; ++y) {
      for (size_t x = 0; x < config.width; ++x) {
        const size_t m = static_cast<size_t>(s.labels.at(y, x) - 1);
        for (size_t c = 0; c < 3; ++c) sum[m][c] += s.image.at(c, y, x);
        ++count[m];
      }
    }
  }
  // Classes never drawn fall back to the palette color.
  const Palette palette = MakePalette(config);
  std::vector<Color> protos(M);
  for (size_t m = 0; m < M; ++m) {
    for (size_t c = 0; c < 3; ++c) {
      protos[m][c] = count[m] ? sum[m][c] / static_cast<double>(count[m]) : palette.colors[m][c];
    }
  }
  return PrototypeSegmenter(std::move(protos));
}

LabelMap PrototypeSegmenter::Segment(const Tensor& image) const {
  const size_t H = image.dim(1), W = image.dim(2);
  LabelMap out(H, W, 1);
  for (size_t y = 0; y < H; ++y) {
    for (size_t x = 0; x < W; ++x) {
      double best = std::numeric_limits<double>::infinity();
      int best_m = 1;
      for (size_t m = 0; m < prototypes_.size(); ++m) {
        double d = 0.0;
        for (size_t c = 0; c < 3; ++c) {
          const double diff = image.at(c, y, x) - prototypes_[m][c];
          d += diff * diff;
        }
        if (d < best) {
          best = d;
          best_m = static_cast<int>(m) + 1;
        }
      }
      out.at(y, x) = best_m;
    }
  }
  return out;
}

TaskPrediction PrototypeSegmenter::Predict(const Tensor& image) const {
  return TaskPrediction{kind_, Segment(image), {}};
}

TaskPrediction HistogramClassifier::Predict(const Tensor& image) const {
  const LabelMap labels = segmenter_.Segment(image);
  const size_t M = segmenter_.num_classes();
  std::vector<double> p(M, 1.0);
  for (int l : labels.labels()) p[static_cast<size_t>(l - 1)] += 1.0;
  const double total = static_cast<double>(labels.size() + M);
  for (double& v : p) v /= total;
  return TaskPrediction{TaskKind::kClassification, {}, std::move(p)};
}

double PixelAccuracy(const LabelMap& predicted, const LabelMap& truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("label map size mismatch");
  size_t hit = 0;
  for (size_t i = 0; i < truth.size(); ++i) hit += predicted[i] == truth[i];
  return truth.size() ? static_cast<double>(hit) / truth.size() : 1.0;
}

}  // namespace semcodec
