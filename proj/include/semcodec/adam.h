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

#ifndef SEMCODEC_ADAM_H_
#define SEMCODEC_ADAM_H_

#include <vector>

#include "semcodec/param_block.h"

namespace semcodec {

struct AdamConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Descends block.grad with bias-corrected first/second moments. One
// optimizer instance tracks one ParamBlock.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void Step(ParamBlock& block);
  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  const AdamConfig& config() const { return config_; }
  long steps() const { return steps_; }

 private:
  AdamConfig config_;
  long steps_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace semcodec

#endif  // SEMCODEC_ADAM_H_
