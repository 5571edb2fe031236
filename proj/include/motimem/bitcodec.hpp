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

// Word-level hybrid coding: top-k MSB truncation, Hamming-weight gated
// inversion of the top-k field, and an inversion flag carried in the LSB.
// Every transform keeps the word B bits wide.

#pragma once

#include <bit>
#include <optional>

#include "motimem/frame.hpp"
#include "motimem/mask.hpp"

namespace motimem {

/// Bit width B, retained MSB count k, inversion threshold tau and the RoI
/// mask block size. Validated on construction:
///   1 <= B <= 16, 1 <= k <= B-1, 0 <= tau <= k, block_size >= 1.
/// tau defaults to floor(k/2).
class CodingParams {
 public:
  CodingParams(int bit_width, int retained_k,
               std::optional<int> tau = std::nullopt, int block_size = 16);

  constexpr int bit_width() const noexcept { return bit_width_; }
  constexpr int retained_k() const noexcept { return retained_k_; }
  constexpr int tau() const noexcept { return tau_; }
  constexpr int block_size() const noexcept { return block_size_; }

  /// Largest top-k weight any encoded word can carry: max(tau, k - tau - 1).
  constexpr int shaped_weight_bound() const noexcept {
    return tau_ > retained_k_ - tau_ - 1 ? tau_ : retained_k_ - tau_ - 1;
  }

  friend bool operator==(const CodingParams&,
                         const CodingParams&) = default;

 private:
  int bit_width_;
  int retained_k_;
  int tau_;
  int block_size_;
};

/// m^(k): ones in bit positions B-k .. B-1.
constexpr PixelWord msb_mask(const CodingParams& p) noexcept {
  const unsigned all = (1u << p.bit_width()) - 1u;
  const unsigned low = (1u << (p.bit_width() - p.retained_k())) - 1u;
  return static_cast<PixelWord>(all & ~low);
}

constexpr int top_k_weight(PixelWord x, const CodingParams& p) noexcept {
  return std::popcount(static_cast<unsigned>(x & msb_mask(p)));
}

constexpr bool inversion_flag(PixelWord x, const CodingParams& p) noexcept {
  return top_k_weight(x, p) > p.tau();
}

/// Zeroes the low B-k bits.
constexpr PixelWord truncate_k(PixelWord x, const CodingParams& p) noexcept {
  return static_cast<PixelWord>(x & msb_mask(p));
}

namespace detail {

constexpr PixelWord invert_and_flag(PixelWord x, bool flag,
                                    const CodingParams& p) noexcept {
  const unsigned inverted = flag ? x ^ msb_mask(p) : x;
  return static_cast<PixelWord>((inverted & ~1u) | (flag ? 1u : 0u));
}

constexpr PixelWord undo_inversion(PixelWord e,
                                   const CodingParams& p) noexcept {
  return (e & 1u) ? static_cast<PixelWord>(e ^ msb_mask(p)) : e;
}

}  // namespace detail

/// RoI path: invert the top-k field when its weight exceeds tau and write
/// the decision into the LSB. Bits 1 .. B-k-1 pass through.
constexpr PixelWord encode_roi(PixelWord x, const CodingParams& p) noexcept {
  return detail::invert_and_flag(x, inversion_flag(x, p), p);
}

/// Reads the flag from the LSB and restores the top-k field. The result
/// differs from the source only in bit 0.
constexpr PixelWord decode_roi(PixelWord e, const CodingParams& p) noexcept {
  return detail::undo_inversion(e, p);
}

/// Background path: truncate to the top k bits, then shape them like the
/// RoI path. The flag is computed on the truncated value.
constexpr PixelWord encode_bg(PixelWord x, const CodingParams& p) noexcept {
  const PixelWord t = truncate_k(x, p);
  return detail::invert_and_flag(t, inversion_flag(t, p), p);
}

/// Restores the top-k field; low bits stay truncated and the LSB keeps the
/// flag.
constexpr PixelWord decode_bg(PixelWord e, const CodingParams& p) noexcept {
  return detail::undo_inversion(e, p);
}

/// Mask-routed output of encode_frame. `words` has the source frame's shape.
struct EncodedFrame {
  CodingParams params;
  RoiMask mask;
  Frame words;

  friend bool operator==(const EncodedFrame&,
                         const EncodedFrame&) = default;
};

/// Routes every pixel through encode_roi when its block is set and through
/// encode_bg otherwise. All channels of a pixel share the mask bit.
/// Throws DimensionMismatch when the mask grid does not fit the frame or its
/// block size differs from params, InvalidParams when the frame's bit width
/// differs from params. `jobs` > 1 splits rows across worker threads.
EncodedFrame encode_frame(const Frame& frame, const RoiMask& mask,
                          const CodingParams& params, int jobs = 1);

Frame decode_frame(const EncodedFrame& encoded, int jobs = 1);

/// Truncation only (no inversion, no flag); the uniform-precision ablation.
Frame truncate_frame(const Frame& frame, const CodingParams& params);

}  // namespace motimem
