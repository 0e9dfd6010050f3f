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

#ifndef SEMCODEC_BD_METRIC_H_
#define SEMCODEC_BD_METRIC_H_

#include <array>
#include <vector>

namespace semcodec {

struct RateQualityPoint {
  double rate;  // bpp, > 0
  double quality;
};

enum class BdMode { kRate, kQuality };

// Least-squares cubic c0 + c1 x + c2 x^2 + c3 x^3; exact with 4 points.
std::array<double, 4> FitCubic(const std::vector<double>& x, const std::vector<double>& y);

// Bjontegaard delta of `test` against `anchor`. kQuality: mean quality
// difference over the common log10-rate interval. kRate: mean rate change
// in percent over the common quality interval. Each curve needs >= 4
// points with distinct rates (and distinct qualities for kRate). Throws
// std::invalid_argument when the intervals do not overlap.
double BdMetric(const std::vector<RateQualityPoint>& anchor,
                const std::vector<RateQualityPoint>& test, BdMode mode);

}  // namespace semcodec

#endif  // SEMCODEC_BD_METRIC_H_
