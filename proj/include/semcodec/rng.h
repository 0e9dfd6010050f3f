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

#ifndef SEMCODEC_RNG_H_
#define SEMCODEC_RNG_H_

#include <cstdint>
#include <span>

namespace semcodec {

// Counter-based generator: draw k of stream (seed, stream_id) is a pure
// function of (seed, stream_id, k), so sequences never depend on call order
// across streams.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id);

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }
  uint64_t counter() const { return counter_; }

  uint64_t NextU64();
  // Uniform on [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer on [0, n).
  uint64_t UniformInt(uint64_t n);
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  // Independent child stream, derived from this stream's identity only.
  RngStream Fork(uint64_t child_id) const;

 private:
  uint64_t seed_;
  uint64_t stream_id_;
  uint64_t key_;
  uint64_t counter_ = 0;
};

// Fills `out` with N(0, stddev^2) draws.
void FillNormal(RngStream& rng, double stddev, std::span<double> out);

}  // namespace semcodec

#endif  // SEMCODEC_RNG_H_
