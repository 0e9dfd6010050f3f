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

#ifndef SEMCODEC_CHANNEL_H_
#define SEMCODEC_CHANNEL_H_

#include <string>
#include <string_view>

#include "semcodec/bit_io.h"
#include "semcodec/bitstream.h"
#include "semcodec/rng.h"

namespace semcodec {

enum class ChannelKind { kLossless, kAwgn };

// Which parts of a bitstream bypass the noisy channel. The container header,
// levels, Huffman tables and count fields are always protected.
enum class ProtectedRegion {
  kHeader,          // payload and label-map entry bits are noisy
  kHeaderAndLabels  // only payload bits are noisy
};

struct ChannelSpec {
  ChannelKind kind = ChannelKind::kLossless;
  double snr_db = 0.0;
  ProtectedRegion protect = ProtectedRegion::kHeader;

  static ChannelSpec Lossless() { return {}; }
  static ChannelSpec Awgn(double snr_db) { return {ChannelKind::kAwgn, snr_db}; }
  // "lossless" or "awgn:<snr dB>".
  static ChannelSpec Parse(std::string_view text);
  std::string ToString() const;
  // Throws std::invalid_argument on a non-finite SNR.
  void Validate() const;
};

// Q(sqrt(2 * snr_lin)), the BPSK hard-decision bit-error rate.
double BpskBitErrorRate(double snr_db);

// BPSK over AWGN: bit b -> 2b-1, noise variance 1/(2 snr_lin), sign decision.
BitVector AwgnTransmit(const BitVector& bits, double snr_db, RngStream& rng);

struct TransmitStats {
  size_t noisy_bits = 0;
  size_t flipped_bits = 0;
};

// Sends the exposed regions of `stream` through `channel`. Returns the
// stream as received; the lossless channel returns it unchanged.
SemanticBitstream TransmitBitstream(const SemanticBitstream& stream, const ChannelSpec& channel,
                                    RngStream& rng, TransmitStats* stats = nullptr);

}  // namespace semcodec

#endif  // SEMCODEC_CHANNEL_H_
