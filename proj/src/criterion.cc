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

#include "semcodec/criterion.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semcodec {

void CriterionWeights::Validate() const {
  if (!(lambda >= 0) || !(eta >= 0) || !std::isfinite(lambda) || !std::isfinite(eta)) {
    throw std::invalid_argument("criterion weights must be finite and non-negative");
  }
}

double CompositeLoss(double rate, double semantic, double perceptual,
                     const CriterionWeights& weights) {
  return weights.lambda * rate + semantic + weights.eta * perceptual;
}

CriterionReport MakeReport(double rate, double semantic, double perceptual,
                           const CriterionWeights& weights) {
  return {rate, semantic, perceptual, CompositeLoss(rate, semantic, perceptual, weights)};
}

double Iou(std::span<const uint8_t> a, std::span<const uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("IoU over different grids");
  size_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    inter += a[i] && b[i];
    uni += a[i] || b[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

double ClassIou(const LabelMap& a, const LabelMap& b, int m) {
  if (a.size() != b.size()) throw std::invalid_argument("IoU over different grids");
  size_t inter = 0, uni = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] == m, in_b = b[i] == m;
    inter += in_a && in_b;
    uni += in_a || in_b;
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

double MeanIou(const LabelMap& a, const LabelMap& b, size_t num_classes) {
  if (num_classes == 0) throw std::invalid_argument("mean IoU over zero classes");
  double total = 0.0;
  for (size_t m = 1; m <= num_classes; ++m) total += ClassIou(a, b, static_cast<int>(m));
  return total / static_cast<double>(num_classes);
}

double MiouLoss(const TaskPrediction& source, const TaskPrediction& recon,
                size_t num_classes) {
  return 1.0 - MeanIou(source.labels, recon.labels, num_classes);
}

double DetLossFromMiou(double miou) { return -std::log(std::max(miou, kDetLossFloor)); }

double DetLoss(const TaskPrediction& source, const TaskPrediction& recon,
               size_t num_classes) {
  return DetLossFromMiou(MeanIou(source.labels, recon.labels, num_classes));
}

double CeLoss(int label, std::span<const double> p_hat, double epsilon) {
  const size_t M = p_hat.size();
  if (M == 0) throw std::invalid_argument("empty probability vector");
  if (label < 1 || static_cast<size_t>(label) > M) {
    throw std::invalid_argument("label " + std::to_string(label) + " outside [1, " +
                                std::to_string(M) + "]");
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon not in [0, 1)");
  if (epsilon > 0.0 && M < 2) throw std::invalid_argument("label smoothing needs M >= 2");
  double sum = 0.0;
  for (double p : p_hat) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities not normalized");
  double total = 0.0;
  for (size_t i = 0; i < M; ++i) {
    const double p = (static_cast<int>(i) + 1 == label)
                         ? 1.0 - epsilon
                         : epsilon / static_cast<double>(M - 1);
    if (p > 0.0) total -= p * std::log(p_hat[i]);
  }
  return total / static_cast<double>(M);
}

namespace {

void CheckSameImage(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape() || a.rank() != 3) {
    throw std::invalid_argument("image shapes differ: " + ShapeString(a.shape()) + " vs " +
                                ShapeString(b.shape()));
  }
}

}  // namespace

double Psnr(const Tensor& a, const Tensor& b) {
  CheckSameImage(a, b);
  double mse = 0.0;
  for (size_t i = 0; i < a.size(); ++i) mse += (a[i] - b[i]) * (a[i] - b[i]);
  mse /= static_cast<double>(a.size());
  if (mse < 1e-10) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double Ssim(const Tensor& a, const Tensor& b) {
  CheckSameImage(a, b);
  constexpr double kC1 = 0.01 * 0.01, kC2 = 0.03 * 0.03;
  constexpr size_t kWin = 8;
  const size_t C = a.dim(0), H = a.dim(1), W = a.dim(2);
  double total = 0.0;
  size_t windows = 0;
  for (size_t c = 0; c < C; ++c) {
    for (size_t y0 = 0; y0 + kWin <= H; y0 += kWin) {
      for (size_t x0 = 0; x0 + kWin <= W; x0 += kWin) {
        double ma = 0, mb = 0;
        for (size_t y = y0; y < y0 + kWin; ++y)
          for (size_t x = x0; x < x0 + kWin; ++x) {
            ma += a.at(c, y, x);
            mb += b.at(c, y, x);
          }
        const double n = kWin * kWin;
        ma /= n;
        mb /= n;
        double va = 0, vb = 0, cov = 0;
        for (size_t y = y0; y < y0 + kWin; ++y)
          for (size_t x = x0; x < x0 + kWin; ++x) {
            const double da = a.at(c, y, x) - ma, db = b.at(c, y, x) - mb;
            va += da * da;
            vb += db * db;
            cov += da * db;
          }
        va /= n;
        vb /= n;
        cov /= n;
        total += ((2 * ma * mb + kC1) * (2 * cov + kC2)) /
                 ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
        ++windows;
      }
    }
  }
  if (windows == 0) throw std::invalid_argument("image smaller than one SSIM window");
  return total / static_cast<double>(windows);
}

PixelMetrics ComputePixelMetrics(const Tensor& a, const Tensor& b) {
  return {Psnr(a, b), Ssim(a, b)};
}

namespace {

Eigen::MatrixXd ToMatrix(const std::vector<std::vector<double>>& rows, size_t dim) {
  Eigen::MatrixXd m(rows.size(), dim);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw std::invalid_argument("descriptor dimension mismatch");
    for (size_t j = 0; j < dim; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd SymmetricSqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double FrechetDistance(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("Frechet distance needs at least 2 vectors per set");
  }
  const size_t dim = a[0].size();
  const Eigen::MatrixXd A = ToMatrix(a, dim), B = ToMatrix(b, dim);
  const Eigen::VectorXd mu_a = A.colwise().mean(), mu_b = B.colwise().mean();
  const Eigen::MatrixXd ca = A.rowwise() - mu_a.transpose();
  const Eigen::MatrixXd cb = B.rowwise() - mu_b.transpose();
  const Eigen::MatrixXd sa = ca.transpose() * ca / static_cast<double>(a.size() - 1);
  const Eigen::MatrixXd sb = cb.transpose() * cb / static_cast<double>(b.size() - 1);
  if (!sa.allFinite() || !sb.allFinite()) {
    throw std::invalid_argument("non-finite covariance in Frechet distance");
  }
  // tr((Sa Sb)^1/2) = tr((Sa^1/2 Sb Sa^1/2)^1/2), which is symmetric.
  const Eigen::MatrixXd ra = SymmetricSqrt(sa);
  const Eigen::MatrixXd inner = ra * sb * ra;
  const Eigen::MatrixXd cross = SymmetricSqrt(0.5 * (inner + inner.transpose()));
  const double d = (mu_a - mu_b).squaredNorm() + sa.trace() + sb.trace() - 2.0 * cross.trace();
  return std::max(d, 0.0);
}

SemanticCriterion::SemanticCriterion(const TaskOracle& oracle,
                                     const PerceptualExtractor& extractor,
                                     CriterionWeights weights, size_t num_classes,
                                     double epsilon)
    : oracle_(oracle),
      extractor_(extractor),
      weights_(weights),
      num_classes_(num_classes),
      epsilon_(epsilon) {
  weights_.Validate();
}

SemanticCriterion::Reference SemanticCriterion::Prepare(const Tensor& source) const {
  return {oracle_.Predict(source), extractor_.Features(source)};
}

double SemanticCriterion::SemanticLoss(const Reference& ref, const Tensor& recon) const {
  const TaskPrediction p = oracle_.Predict(recon);
  switch (oracle_.kind()) {
    case TaskKind::kSegmentation:
      return MiouLoss(ref.prediction, p, num_classes_);
    case TaskKind::kDetectionProxy:
      return DetLoss(ref.prediction, p, num_classes_);
    case TaskKind::kClassification: {
      const auto& src = ref.prediction.probabilities;
      const int label =
          static_cast<int>(std::max_element(src.begin(), src.end()) - src.begin()) + 1;
      return CeLoss(label, p.probabilities, epsilon_);
    }
  }
  return 0.0;
}

CriterionReport SemanticCriterion::Evaluate(const Reference& ref, const Tensor& recon,
                                            double rate) const {
  const double ls = SemanticLoss(ref, recon);
  const double lp = extractor_.LossFromFeatures(ref.features, extractor_.Features(recon));
  return MakeReport(rate, ls, lp, weights_);
}

}  // namespace semcodec
