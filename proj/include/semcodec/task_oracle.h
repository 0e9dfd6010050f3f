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

#ifndef SEMCODEC_TASK_ORACLE_H_
#define SEMCODEC_TASK_ORACLE_H_

#include <memory>
#include <vector>

#include "semcodec/scene.h"
#include "semcodec/tensor.h"

namespace semcodec {

enum class TaskKind { kSegmentation, kDetectionProxy, kClassification };

struct TaskPrediction {
  TaskKind kind = TaskKind::kSegmentation;
  LabelMap labels;                    // segmentation and detection-proxy
  std::vector<double> probabilities;  // classification, over M classes
};

// Deterministic stand-in for the downstream analysis network.
class TaskOracle {
 public:
  virtual ~TaskOracle() = default;
  virtual TaskKind kind() const = 0;
  virtual TaskPrediction Predict(const Tensor& image) const = 0;
};

// Per-pixel nearest mean-color classifier.
class PrototypeSegmenter : public TaskOracle {
 public:
  explicit PrototypeSegmenter(std::vector<Color> prototypes,
                              TaskKind kind = TaskKind::kSegmentation);

  // Fits per-class mean colors on `num_samples` generated scenes.
  static PrototypeSegmenter Fit(const SceneConfig& config, size_t num_samples = 256,
                                uint64_t seed = 0x5E6);

  TaskKind kind() const override { return kind_; }
  TaskPrediction Predict(const Tensor& image) const override;
  LabelMap Segment(const Tensor& image) const;

  const std::vector<Color>& prototypes() const { return prototypes_; }
  size_t num_classes() const { return prototypes_.size(); }

 private:
  std::vector<Color> prototypes_;
  TaskKind kind_;
};

// Scene classifier: Laplace-smoothed histogram of the segmenter's labels.
// The "ground-truth" label of an image is its most frequent class.
class HistogramClassifier : public TaskOracle {
 public:
  explicit HistogramClassifier(PrototypeSegmenter segmenter)
      : segmenter_(std::move(segmenter)) {}

  TaskKind kind() const override { return TaskKind::kClassification; }
  TaskPrediction Predict(const Tensor& image) const override;

 private:
  PrototypeSegmenter segmenter_;
};

double PixelAccuracy(const LabelMap& predicted, const LabelMap& truth);

}  // namespace semcodec

#endif  // SEMCODEC_TASK_ORACLE_H_
