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

#include "semcodec/policy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace semcodec {

Tensor PolicyInput(const AllocState& state) {
  const Tensor& f = state.features;
  if (f.rank() != 3) throw std::invalid_argument("state features must be [n x h x w]");
  const size_t n = f.dim(0), cells = f.dim(1) * f.dim(2);
  if (state.mask.down.size() != cells) throw std::invalid_argument("state mask mismatch");
  if (state.step < 1 || static_cast<size_t>(state.step) > state.num_steps) {
    throw std::invalid_argument("state step outside [1, M]");
  }
  Tensor in = Tensor::Matrix(1, PolicyInputSize(n, cells, state.num_steps));
  const size_t count = state.mask.DownCount();
  for (size_t c = 0; c < n; ++c) {
    double sum = 0.0, mx = 0.0;
    bool first = true;
    for (size_t cell = 0; cell < cells; ++cell) {
      if (!state.mask.down[cell]) continue;
      const double v = f[c * cells + cell];
      sum += v;
      mx = first ? v : std::max(mx, v);
      first = false;
    }
    in[c] = count ? sum / static_cast<double>(count) : 0.0;
    in[n + c] = mx;
  }
  for (size_t cell = 0; cell < cells; ++cell) in[2 * n + cell] = state.mask.down[cell];
  in[2 * n + cells + static_cast<size_t>(state.step - 1)] = 1.0;
  return in;
}

size_t PolicyInputSize(size_t channels, size_t cells, size_t num_steps) {
  return 2 * channels + cells + num_steps;
}

ParamBlock MakePolicyParams(size_t input_size, const PolicyConfig& config, RngStream& rng) {
  if (config.num_levels < 1 || config.num_levels > kNumLevels) {
    throw std::invalid_argument("policy levels must be in [1, 6]");
  }
  if (!(config.dropout >= 0.0 && config.dropout < 1.0)) {
    throw std::invalid_argument("dropout must be in [0, 1)");
  }
  ParamBlock p;
  Tensor w1 = Tensor::Matrix(input_size, config.hidden1);
  FillNormal(rng, std::sqrt(2.0 / static_cast<double>(input_size)), w1.data());
  Tensor w2 = Tensor::Matrix(config.hidden1, config.hidden2);
  FillNormal(rng, std::sqrt(2.0 / static_cast<double>(config.hidden1)), w2.data());
  p.Add("pol.w1", std::move(w1));
  p.Add("pol.b1", Tensor::Matrix(1, config.hidden1));
  p.Add("pol.w2", std::move(w2));
  p.Add("pol.b2", Tensor::Matrix(1, config.hidden2));
  p.Add("pol.w3", Tensor::Matrix(config.hidden2, static_cast<size_t>(config.num_levels)));
  p.Add("pol.b3", Tensor::Matrix(1, static_cast<size_t>(config.num_levels)));
  return p;
}

DropoutMasks DrawDropout(const PolicyConfig& config, RngStream& rng) {
  DropoutMasks d;
  if (config.dropout <= 0.0) return d;
  const double keep = 1.0 - config.dropout;
  auto draw = [&](size_t width) {
    Tensor t = Tensor::Matrix(1, width);
    for (double& v : t.values()) v = rng.Uniform() < keep ? 1.0 / keep : 0.0;
    return t;
  };
  d.h1 = draw(config.hidden1);
  d.h2 = draw(config.hidden2);
  return d;
}

Var PolicyLogProbGraph(Graph& g, const Tensor& input, const ParamRef& params,
                       const PolicyConfig& config, const DropoutMasks* dropout) {
  Var x = g.Constant(input);
  Var h1 = g.Relu(g.Add(g.MatMul(x, params(g, "pol.w1")), params(g, "pol.b1")));
  if (dropout && dropout->h1.size()) h1 = g.Mul(h1, g.Constant(dropout->h1));
  Var h2 = g.Relu(g.Add(g.MatMul(h1, params(g, "pol.w2")), params(g, "pol.b2")));
  if (dropout && dropout->h2.size()) h2 = g.Mul(h2, g.Constant(dropout->h2));
  Var logits = g.Add(g.MatMul(h2, params(g, "pol.w3")), params(g, "pol.b3"));
  if (g.value(logits).cols() != static_cast<size_t>(config.num_levels)) {
    throw std::invalid_argument("policy parameters do not match the level count");
  }
  return g.LogSoftmax(logits);
}

std::vector<double> PolicyForward(const Tensor& input, const ParamBlock& params,
                                  const PolicyConfig& config) {
  Graph g;
  const Tensor& lp = g.value(PolicyLogProbGraph(g, input, ParamRef(params), config));
  std::vector<double> p(lp.size());
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) total += p[i] = std::exp(lp[i]);
  for (double& v : p) v /= total;
  return p;
}

SampledAction SampleAction(std::span<const double> probs, RngStream& rng) {
  if (probs.empty()) throw std::invalid_argument("empty action distribution");
  const double u = rng.Uniform();
  double cdf = 0.0;
  size_t pick = probs.size() - 1;
  for (size_t i = 0; i < probs.size(); ++i) {
    cdf += probs[i];
    if (u < cdf) {
      pick = i;
      break;
    }
  }
  // Guard the rounding tail of the CDF against zero-probability levels.
  while (probs[pick] <= 0.0 && pick > 0) --pick;
  return {static_cast<int>(pick) + 1, std::log(probs[pick])};
}

int GreedyAction(std::span<const double> probs) {
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin()) + 1;
}

uint64_t ParamHash(const ParamBlock& params) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (double v : params.FlatValues()) {
    h ^= std::bit_cast<uint64_t>(v);
    h *= 0x100000001B3ull;
    h ^= h >> 29;
  }
  return h;
}

}  // namespace semcodec
