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

#include "semcodec/adam.h"

#include <cmath>

namespace semcodec {

void Adam::Step(ParamBlock& block) {
  const size_t n = block.NumScalars();
  if (m_.size() != n) {
    m_.assign(n, 0.0);
    v_.assign(n, 0.0);
    steps_ = 0;
  }
  ++steps_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  size_t k = 0;
  for (auto& e : block.entries()) {
    for (size_t i = 0; i < e.value.size(); ++i, ++k) {
      const double g = e.grad.size() ? e.grad[i] : 0.0;
      m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
      v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g * g;
      const double mhat = m_[k] / c1;
      const double vhat = v_[k] / c2;
      e.value[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
  }
}

}  // namespace semcodec
