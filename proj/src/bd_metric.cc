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

#include "semcodec/bd_metric.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace semcodec {

std::array<double, 4> FitCubic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4) {
    throw std::invalid_argument("cubic fit needs at least 4 paired points");
  }
  // Center and scale x so the Vandermonde system stays well conditioned.
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double mid = 0.5 * (*lo + *hi);
  const double half = std::max(0.5 * (*hi - *lo), 1e-300);
  Eigen::MatrixXd A(x.size(), 4);
  Eigen::VectorXd b(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double t = (x[i] - mid) / half;
    A(i, 0) = 1.0;
    A(i, 1) = t;
    A(i, 2) = t * t;
    A(i, 3) = t * t * t;
    b(i) = y[i];
  }
  const Eigen::Vector4d c = A.colPivHouseholderQr().solve(b);
  // Expand p(t) with t = (x - mid) / half back into powers of x.
  const double s = 1.0 / half, k = -mid / half;
  std::array<double, 4> out{};
  out[0] = c(0) + c(1) * k + c(2) * k * k + c(3) * k * k * k;
  out[1] = c(1) * s + 2 * c(2) * k * s + 3 * c(3) * k * k * s;
  out[2] = c(2) * s * s + 3 * c(3) * k * s * s;
  out[3] = c(3) * s * s * s;
  return out;
}

namespace {

double IntegrateCubic(const std::array<double, 4>& c, double a, double b) {
  auto prim = [&](double x) {
    return x * (c[0] + x * (c[1] / 2 + x * (c[2] / 3 + x * c[3] / 4)));
  };
  return prim(b) - prim(a);
}

void CheckDistinct(const std::vector<double>& v, const char* what) {
  if (std::set<double>(v.begin(), v.end()).size() != v.size()) {
    throw std::invalid_argument(std::string("BD curves need distinct ") + what);
  }
}

struct Curve {
  std::vector<double> log_rate;
  std::vector<double> quality;
};

Curve Prepare(const std::vector<RateQualityPoint>& pts, BdMode mode) {
  if (pts.size() < 4) throw std::invalid_argument("BD curves need at least 4 points");
  Curve c;
  for (const RateQualityPoint& p : pts) {
    if (!(p.rate > 0.0) || !std::isfinite(p.rate) || !std::isfinite(p.quality)) {
      throw std::invalid_argument("BD points need finite positive rates and finite quality");
    }
    c.log_rate.push_back(std::log10(p.rate));
    c.quality.push_back(p.quality);
  }
  CheckDistinct(c.log_rate, "rates");
  if (mode == BdMode::kRate) CheckDistinct(c.quality, "quality values");
  return c;
}

// Mean of (p_test - p_anchor) over the overlap of the two x ranges.
double MeanGap(const std::vector<double>& xa, const std::vector<double>& ya,
               const std::vector<double>& xb, const std::vector<double>& yb) {
  const double lo = std::max(*std::min_element(xa.begin(), xa.end()),
                             *std::min_element(xb.begin(), xb.end()));
  const double hi = std::min(*std::max_element(xa.begin(), xa.end()),
                             *std::max_element(xb.begin(), xb.end()));
  if (!(hi > lo)) throw std::invalid_argument("BD curves do not overlap");
  const double ia = IntegrateCubic(FitCubic(xa, ya), lo, hi);
  const double ib = IntegrateCubic(FitCubic(xb, yb), lo, hi);
  return (ib - ia) / (hi - lo);
}

}  // namespace

double BdMetric(const std::vector<RateQualityPoint>& anchor,
                const std::vector<RateQualityPoint>& test, BdMode mode) {
  const Curve a = Prepare(anchor, mode), b = Prepare(test, mode);
  if (mode == BdMode::kQuality) return MeanGap(a.log_rate, a.quality, b.log_rate, b.quality);
  const double gap = MeanGap(a.quality, a.log_rate, b.quality, b.log_rate);
  return (std::pow(10.0, gap) - 1.0) * 100.0;
}

}  // namespace semcodec
