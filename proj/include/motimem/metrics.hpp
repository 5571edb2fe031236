// Copyright 2026 The MotiMem Authors
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

// Energy-proxy metrics over serialized bitstreams (bit-1 density, NBD,
// word transition activity) and PSNR as a fidelity check.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "motimem/frame.hpp"

namespace motimem {

/// Growable bit sequence, packed MSB-first into bytes.
class BitStream {
 public:
  BitStream() = default;

  void push_back(bool bit);
  /// Appends the low `width` bits of `value`, most significant first.
  void append_bits(std::uint64_t value, int width);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool operator[](std::size_t i) const noexcept {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  /// Reads `width` (<= 64) bits starting at `pos`, first bit most significant.
  std::uint64_t read_bits(std::size_t pos, int width) const;

  std::size_t count_ones() const noexcept;
  BitStream complemented() const;

  /// Every pixel word emitted as B bits MSB-first, row-major order with
  /// channels interleaved.
  static BitStream from_frame(const Frame& frame);

  friend bool operator==(const BitStream&, const BitStream&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

/// Fraction of set bits. Throws EmptyStream on an empty stream.
double bit1_density(const BitStream& stream);

/// density(enc) / density(raw); nullopt when raw has no set bits.
/// Throws EmptyStream if either stream is empty.
std::optional<double> nbd(const BitStream& raw, const BitStream& enc);

/// Mean per-bit Hamming distance between consecutive W-bit words:
/// sum d_H(w_n, w_{n-1}) / ((N-1) * W). Throws Misaligned when the length is
/// not a multiple of W, TooShort when there are fewer than two words.
double transition_activity(const BitStream& stream, int word_width);

struct PsnrResult {
  double mse = 0.0;
  /// +infinity when mse == 0.
  double psnr_db = 0.0;
};

/// Throws DimensionMismatch unless both frames share shape and bit width.
PsnrResult psnr(const Frame& reference, const Frame& test);

struct ActivityReport {
  int frame_index = 0;
  double raw_bit1_density = 0.0;
  double enc_bit1_density = 0.0;
  std::optional<double> nbd;
  double alpha_raw = 0.0;
  double alpha_enc = 0.0;
  int word_width = 8;
  double psnr_db = 0.0;
  double mse = 0.0;
};

/// Measures one frame: densities and alphas on the raw and encoded streams,
/// PSNR of the decoded frame against the raw one.
ActivityReport measure_activity(int frame_index, const Frame& raw,
                                const Frame& encoded, const Frame& decoded,
                                int word_width);

}  // namespace motimem
