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

#include "semcodec/quantizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semcodec {

QuantizerSpec::QuantizerSpec(std::vector<double> centers, double softness)
    : centers_(std::move(centers)), softness_(softness) {
  if (centers_.empty()) throw std::invalid_argument("quantizer needs at least one center");
  if (centers_.size() > 256) throw std::invalid_argument("quantizer limited to 256 centers");
  for (size_t i = 1; i < centers_.size(); ++i) {
    if (!(centers_[i] > centers_[i - 1])) {
      throw std::invalid_argument("quantizer centers must be strictly increasing");
    }
  }
  if (!(softness_ > 0)) throw std::invalid_argument("quantizer softness must be positive");
}

QuantizerSpec QuantizerSpec::ForLevel(int level, double softness) {
  if (level < 1 || level > kNumLevels) {
    throw std::invalid_argument("quantization level must be in [1, 6], got " +
                                std::to_string(level));
  }
  const size_t count = size_t{1} << level;
  std::vector<double> c(count);
  for (size_t t = 0; t < count; ++t) c[t] = -1.0 + 2.0 * t / static_cast<double>(count - 1);
  QuantizerSpec spec(std::move(c), softness);
  spec.level_ = level;
  return spec;
}

size_t QuantizerSpec::NearestIndex(double v) const {
  auto it = std::lower_bound(centers_.begin(), centers_.end(), v);
  if (it == centers_.begin()) return 0;
  if (it == centers_.end()) return centers_.size() - 1;
  const size_t hi = static_cast<size_t>(it - centers_.begin());
  const size_t lo = hi - 1;
  return (v - centers_[lo] <= centers_[hi] - v) ? lo : hi;
}

double QuantizerSpec::MaxError() const {
  double gap = 0.0;
  for (size_t i = 1; i < centers_.size(); ++i) gap = std::max(gap, centers_[i] - centers_[i - 1]);
  return gap / 2.0;
}

HardQuantized QuantizeHard(const Tensor& features, const QuantizerSpec& spec) {
  HardQuantized out{Tensor(features.shape()), std::vector<uint8_t>(features.size())};
  for (size_t i = 0; i < features.size(); ++i) {
    const size_t k = spec.NearestIndex(std::clamp(features[i], -1.0, 1.0));
    out.symbols[i] = static_cast<uint8_t>(k);
    out.values[i] = spec.centers()[k];
  }
  return out;
}

namespace {

// Softmax weights over centers for one value, plus the soft value and its
// derivative.
struct SoftPoint {
  double value;
  double derivative;
};

SoftPoint SoftAt(double f, const QuantizerSpec& spec, std::vector<double>& w) {
  const auto& c = spec.centers();
  const double s = spec.softness();
  double mx = -std::numeric_limits<double>::infinity();
  for (size_t t = 0; t < c.size(); ++t) {
    w[t] = -s * std::abs(f - c[t]);
    mx = std::max(mx, w[t]);
  }
  double total = 0.0;
  for (size_t t = 0; t < c.size(); ++t) {
    w[t] = std::exp(w[t] - mx);
    total += w[t];
  }
  double value = 0.0, mean_slope = 0.0;
  for (size_t t = 0; t < c.size(); ++t) {
    w[t] /= total;
    value += w[t] * c[t];
    const double slope = f > c[t] ? -s : (f < c[t] ? s : 0.0);
    mean_slope += w[t] * slope;
  }
  // d/df sum_t p_t c_t = sum_t c_t p_t (a_t - mean a), a_t = d(-s|f-c_t|)/df.
  double derivative = 0.0;
  for (size_t t = 0; t < c.size(); ++t) {
    const double slope = f > c[t] ? -s : (f < c[t] ? s : 0.0);
    derivative += c[t] * w[t] * (slope - mean_slope);
  }
  return {value, derivative};
}

}  // namespace

Tensor QuantizeSoft(const Tensor& features, const QuantizerSpec& spec) {
  Tensor out(features.shape());
  std::vector<double> w(spec.size());
  for (size_t i = 0; i < features.size(); ++i) out[i] = SoftAt(features[i], spec, w).value;
  return out;
}

Tensor QuantizeSoftDerivative(const Tensor& features, const QuantizerSpec& spec) {
  Tensor out(features.shape());
  std::vector<double> w(spec.size());
  for (size_t i = 0; i < features.size(); ++i) {
    out[i] = SoftAt(features[i], spec, w).derivative;
  }
  return out;
}

Var QuantizeSoftGraph(Graph& g, Var features, const QuantizerSpec& spec) {
  const Tensor& f = g.value(features);
  return g.Pointwise(features, QuantizeSoft(f, spec), QuantizeSoftDerivative(f, spec));
}

Var QuantizeStraightThrough(Graph& g, Var features, const QuantizerSpec& spec) {
  const Tensor& f = g.value(features);
  Tensor clipped = f;
  for (double& v : clipped.values()) v = std::clamp(v, -1.0, 1.0);
  Tensor derivative = QuantizeSoftDerivative(clipped, spec);
  for (size_t i = 0; i < f.size(); ++i)
    if (f[i] < -1.0 || f[i] > 1.0) derivative[i] = 0.0;
  return g.Pointwise(features, QuantizeHard(f, spec).values, std::move(derivative));
}

Tensor Dequantize(const std::vector<uint8_t>& symbols, const QuantizerSpec& spec,
                  std::vector<size_t> shape) {
  Tensor out(std::move(shape));
  if (out.size() != symbols.size()) throw std::invalid_argument("symbol count mismatch");
  for (size_t i = 0; i < symbols.size(); ++i) {
    out[i] = spec.centers()[std::min<size_t>(symbols[i], spec.size() - 1)];
  }
  return out;
}

}  // namespace semcodec
