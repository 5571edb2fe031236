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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace motimem {

/// One B-bit pixel/channel value. Only the low B bits may be set; the
/// owning Frame enforces that.
using PixelWord = std::uint16_t;

inline constexpr int kMaxBitWidth = 16;

/// H x W x C raster of B-bit words, row-major with channels interleaved.
class Frame {
 public:
  Frame() = default;
  /// Zero-filled frame.
  Frame(int width, int height, int channels, int bit_width);
  Frame(int width, int height, int channels, int bit_width,
        std::vector<PixelWord> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  int bit_width() const noexcept { return bit_width_; }
  PixelWord max_value() const noexcept {
    return static_cast<PixelWord>((1u << bit_width_) - 1u);
  }

  std::size_t size() const noexcept { return pixels_.size(); }
  std::span<const PixelWord> pixels() const noexcept { return pixels_; }
  std::span<PixelWord> pixels() noexcept { return pixels_; }

  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  PixelWord at(int x, int y, int c) const { return pixels_[index(x, y, c)]; }
  void set(int x, int y, int c, PixelWord value);

  bool same_shape(const Frame& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_ && bit_width_ == other.bit_width_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  int bit_width_ = 0;
  std::vector<PixelWord> pixels_;
};

}  // namespace motimem
