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

#ifndef SEMCODEC_POLICY_H_
#define SEMCODEC_POLICY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "semcodec/concepts.h"
#include "semcodec/graph.h"
#include "semcodec/param_block.h"
#include "semcodec/quantizer.h"
#include "semcodec/rng.h"

namespace semcodec {

struct PolicyConfig {
  size_t hidden1 = 64;
  size_t hidden2 = 32;
  int num_levels = kNumLevels;  // Q; actions are levels 1..Q
  double dropout = 0.0;         // on both hidden layers, training only
};

// state^(m) = {f^(m), s^(m), m}.
struct AllocState {
  int step = 1;          // m, 1-based
  size_t num_steps = 0;  // M
  Tensor features;       // f^(m), [n x h x w]
  SemanticMask mask;
};

// Per-channel mean and max of f^(m) over its cells, the downscaled mask,
// and a one-hot of m: a [1 x (2n + h*w + M)] row.
Tensor PolicyInput(const AllocState& state);
size_t PolicyInputSize(size_t channels, size_t cells, size_t num_steps);

// "pol.w1" [D x 64], "pol.b1", "pol.w2" [64 x 32], "pol.b2", "pol.w3"
// [32 x Q], "pol.b3". The output layer starts at zero, so the initial
// policy is uniform.
ParamBlock MakePolicyParams(size_t input_size, const PolicyConfig& config, RngStream& rng);

// Inverted-dropout keep masks ([1 x hidden]); empty tensors mean none.
struct DropoutMasks {
  Tensor h1;
  Tensor h2;
};
DropoutMasks DrawDropout(const PolicyConfig& config, RngStream& rng);

// Log-probabilities [1 x Q] as a graph of the policy parameters.
Var PolicyLogProbGraph(Graph& g, const Tensor& input, const ParamRef& params,
                       const PolicyConfig& config, const DropoutMasks* dropout = nullptr);

// pi(. | state) without dropout.
std::vector<double> PolicyForward(const Tensor& input, const ParamBlock& params,
                                  const PolicyConfig& config);
inline std::vector<double> PolicyForward(const AllocState& state, const ParamBlock& params,
                                         const PolicyConfig& config) {
  return PolicyForward(PolicyInput(state), params, config);
}

struct SampledAction {
  int level;  // 1-based
  double log_prob;
};

// Inverse-CDF draw from `probs`.
SampledAction SampleAction(std::span<const double> probs, RngStream& rng);
// Most probable level, ties to the lowest.
int GreedyAction(std::span<const double> probs);

// Fingerprint of parameter values, used to detect stale trajectories.
uint64_t ParamHash(const ParamBlock& params);

}  // namespace semcodec

#endif  // SEMCODEC_POLICY_H_
