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

#include "motimem/metrics.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "motimem/errors.hpp"

namespace motimem {

void BitStream::push_back(bool bit) {
  if ((size_ & 7) == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ & 7));
  ++size_;
}

void BitStream::append_bits(std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) push_back((value >> i) & 1u);
}

std::uint64_t BitStream::read_bits(std::size_t pos, int width) const {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v = (v << 1) | static_cast<std::uint64_t>((*this)[pos + i]);
  }
  return v;
}

std::size_t BitStream::count_ones() const noexcept {
  // Padding bits in the final byte are always zero.
  std::size_t n = 0;
  for (auto b : bytes_) n += static_cast<std::size_t>(std::popcount(b));
  return n;
}

BitStream BitStream::complemented() const {
  BitStream out = *this;
  for (auto& b : out.bytes_) b = static_cast<std::uint8_t>(~b);
  if (const auto tail = size_ & 7; tail != 0) {
    out.bytes_.back() &= static_cast<std::uint8_t>(0xFFu << (8 - tail));
  }
  return out;
}

BitStream BitStream::from_frame(const Frame& frame) {
  BitStream s;
  s.bytes_.reserve((frame.size() * frame.bit_width() + 7) / 8);
  for (PixelWord w : frame.pixels()) s.append_bits(w, frame.bit_width());
  return s;
}

double bit1_density(const BitStream& stream) {
  if (stream.empty()) {
    throw Error(ErrorKind::kEmptyStream, "bit-1 density of an empty stream");
  }
  return static_cast<double>(stream.count_ones()) /
         static_cast<double>(stream.size());
}

std::optional<double> nbd(const BitStream& raw, const BitStream& enc) {
  const double raw_density = bit1_density(raw);
  const double enc_density = bit1_density(enc);
  if (raw_density == 0.0) return std::nullopt;
  return enc_density / raw_density;
}

double transition_activity(const BitStream& stream, int word_width) {
  if (word_width < 1 || word_width > 64) {
    throw Error(ErrorKind::kInvalidParams,
                "word width must be in [1, 64], got " +
                    std::to_string(word_width));
  }
  if (stream.size() % static_cast<std::size_t>(word_width) != 0) {
    throw Error(ErrorKind::kMisaligned,
                "stream of " + std::to_string(stream.size()) +
                    " bits is not a multiple of W=" +
                    std::to_string(word_width));
  }
  const std::size_t words = stream.size() / word_width;
  if (words < 2) {
    throw Error(ErrorKind::kTooShort,
                "transition activity needs at least two words, got " +
                    std::to_string(words));
  }
  std::uint64_t toggles = 0;
  std::uint64_t prev = stream.read_bits(0, word_width);
  for (std::size_t n = 1; n < words; ++n) {
    const std::uint64_t cur = stream.read_bits(n * word_width, word_width);
    toggles += static_cast<std::uint64_t>(std::popcount(cur ^ prev));
    prev = cur;
  }
  return static_cast<double>(toggles) /
         (static_cast<double>(words - 1) * word_width);
}

PsnrResult psnr(const Frame& reference, const Frame& test) {
  if (!reference.same_shape(test)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "PSNR needs frames of identical shape and bit width");
  }
  const auto a = reference.pixels();
  const auto b = test.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  PsnrResult r;
  r.mse = sum / static_cast<double>(a.size());
  if (r.mse == 0.0) {
    r.psnr_db = std::numeric_limits<double>::infinity();
  } else {
    const double peak = static_cast<double>(reference.max_value());
    r.psnr_db = 10.0 * std::log10(peak * peak / r.mse);
  }
  return r;
}

ActivityReport measure_activity(int frame_index, const Frame& raw,
                                const Frame& encoded, const Frame& decoded,
                                int word_width) {
  if (!raw.same_shape(encoded)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "raw and encoded frames differ in shape");
  }
  const BitStream raw_bits = BitStream::from_frame(raw);
  const BitStream enc_bits = BitStream::from_frame(encoded);
  ActivityReport r;
  r.frame_index = frame_index;
  r.word_width = word_width;
  r.raw_bit1_density = bit1_density(raw_bits);
  r.enc_bit1_density = bit1_density(enc_bits);
  r.nbd = nbd(raw_bits, enc_bits);
  r.alpha_raw = transition_activity(raw_bits, word_width);
  r.alpha_enc = transition_activity(enc_bits, word_width);
  const PsnrResult p = psnr(raw, decoded);
  r.mse = p.mse;
  r.psnr_db = p.psnr_db;
  return r;
}

}  // namespace motimem
