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

#include "semcodec/channel.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "semcodec/label_rle.h"

namespace semcodec {

ChannelSpec ChannelSpec::Parse(std::string_view text) {
  if (text == "lossless") return Lossless();
  constexpr std::string_view kPrefix = "awgn:";
  if (text.substr(0, kPrefix.size()) == kPrefix) {
    const std::string num(text.substr(kPrefix.size()));
    size_t used = 0;
    double snr = 0.0;
    try {
      snr = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size()) {
      throw std::invalid_argument("bad SNR in channel spec '" + std::string(text) + "'");
    }
    ChannelSpec spec = Awgn(snr);
    spec.Validate();
    return spec;
  }
  throw std::invalid_argument("channel must be 'lossless' or 'awgn:<snr>', got '" +
                              std::string(text) + "'");
}

std::string ChannelSpec::ToString() const {
  if (kind == ChannelKind::kLossless) return "lossless";
  std::ostringstream s;
  s << "awgn:" << snr_db;
  return s.str();
}

void ChannelSpec::Validate() const {
  if (kind == ChannelKind::kAwgn && !std::isfinite(snr_db)) {
    throw std::invalid_argument("channel SNR must be finite");
  }
}

double BpskBitErrorRate(double snr_db) {
  const double snr = std::pow(10.0, snr_db / 10.0);
  return 0.5 * std::erfc(std::sqrt(snr));
}

BitVector AwgnTransmit(const BitVector& bits, double snr_db, RngStream& rng) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("channel SNR must be finite");
  const double sigma = std::sqrt(1.0 / (2.0 * std::pow(10.0, snr_db / 10.0)));
  BitVector out;
  for (size_t i = 0; i < bits.size(); ++i) {
    const double y = (bits.Bit(i) ? 1.0 : -1.0) + sigma * rng.Normal();
    out.PushBit(y > 0.0);
  }
  return out;
}

namespace {

size_t CountFlips(const BitVector& a, const BitVector& b) {
  size_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) n += a.Bit(i) != b.Bit(i);
  return n;
}

}  // namespace

SemanticBitstream TransmitBitstream(const SemanticBitstream& stream, const ChannelSpec& channel,
                                    RngStream& rng, TransmitStats* stats) {
  channel.Validate();
  if (channel.kind == ChannelKind::kLossless) return stream;
  SemanticBitstream out = stream;
  TransmitStats local;
  auto send = [&](const BitVector& bits) {
    BitVector rx = AwgnTransmit(bits, channel.snr_db, rng);
    local.noisy_bits += bits.size();
    local.flipped_bits += CountFlips(bits, rx);
    return rx;
  };
  for (ConceptSegment& c : out.concepts) c.payload = send(c.payload);
  if (channel.protect == ProtectedRegion::kHeader) {
    out.label_runs =
        RleEntriesFromBits(send(RleEntryBits(stream.label_runs)), stream.label_runs.size());
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace semcodec
