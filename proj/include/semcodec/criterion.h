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

#ifndef SEMCODEC_CRITERION_H_
#define SEMCODEC_CRITERION_H_

#include <span>
#include <string>
#include <vector>

#include "semcodec/perceptual.h"
#include "semcodec/scene.h"
#include "semcodec/task_oracle.h"
#include "semcodec/tensor.h"

namespace semcodec {

struct CriterionWeights {
  double lambda = 1.0;  // rate
  double eta = 10.0;    // perceptual
  // Throws std::invalid_argument on negative or non-finite weights.
  void Validate() const;
};

struct CriterionReport {
  double rate = 0.0;        // psi, bits per pixel
  double semantic = 0.0;    // L_S
  double perceptual = 0.0;  // L_P
  double composite = 0.0;   // L
};

// L = lambda * rate + L_S + eta * L_P.
double CompositeLoss(double rate, double semantic, double perceptual,
                     const CriterionWeights& weights);
CriterionReport MakeReport(double rate, double semantic, double perceptual,
                           const CriterionWeights& weights);

// |a & b| / |a | b| over indicator vectors of equal length; 1 when both
// are empty.
double Iou(std::span<const uint8_t> a, std::span<const uint8_t> b);
// IoU of class m between two label grids.
double ClassIou(const LabelMap& a, const LabelMap& b, int m);
// Mean over classes 1..M.
double MeanIou(const LabelMap& a, const LabelMap& b, size_t num_classes);

// 1 - mean IoU between the task output on the source and on the
// reconstruction.
double MiouLoss(const TaskPrediction& source, const TaskPrediction& recon,
                size_t num_classes);
// -ln(max(mean IoU, 1e-8)).
double DetLossFromMiou(double miou);
double DetLoss(const TaskPrediction& source, const TaskPrediction& recon,
               size_t num_classes);
inline constexpr double kDetLossFloor = 1e-8;

// -(1/M) sum_i p_i ln p_hat_i. p is one-hot on `label` (1-based) for
// epsilon == 0, else 1 - epsilon on the label and epsilon/(M-1) elsewhere.
// Throws when p_hat is not normalized within 1e-9 or epsilon is outside
// [0, 1).
double CeLoss(int label, std::span<const double> p_hat, double epsilon = 0.0);

// PSNR in dB for images in [0, 1], 99 when MSE < 1e-10.
double Psnr(const Tensor& a, const Tensor& b);
inline constexpr double kPsnrCap = 99.0;
// Mean SSIM over non-overlapping 8x8 windows of each channel.
double Ssim(const Tensor& a, const Tensor& b);

struct PixelMetrics {
  double psnr;
  double ssim;
};
PixelMetrics ComputePixelMetrics(const Tensor& a, const Tensor& b);

// Frechet distance between Gaussian fits of two descriptor sets (rows).
// Needs at least 2 vectors per set of equal dimension.
double FrechetDistance(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b);

// Evaluates the rate-semantic-perceptual criterion of reconstructions of
// one source image against cached source-side quantities.
class SemanticCriterion {
 public:
  SemanticCriterion(const TaskOracle& oracle, const PerceptualExtractor& extractor,
                    CriterionWeights weights, size_t num_classes, double epsilon = 0.1);

  struct Reference {
    TaskPrediction prediction;
    std::vector<Tensor> features;
  };
  Reference Prepare(const Tensor& source) const;

  double SemanticLoss(const Reference& ref, const Tensor& recon) const;
  CriterionReport Evaluate(const Reference& ref, const Tensor& recon, double rate) const;

  const CriterionWeights& weights() const { return weights_; }
  const PerceptualExtractor& extractor() const { return extractor_; }
  size_t num_classes() const { return num_classes_; }

 private:
  const TaskOracle& oracle_;
  const PerceptualExtractor& extractor_;
  CriterionWeights weights_;
  size_t num_classes_;
  double epsilon_;
};

}  // namespace semcodec

#endif  // SEMCODEC_CRITERION_H_
