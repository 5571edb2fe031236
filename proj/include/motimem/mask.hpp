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

/// Block-granularity binary RoI mask. Block (bx, by) covers pixels
/// [bx*block_size, (bx+1)*block_size) x [by*block_size, (by+1)*block_size),
/// clipped to the frame on the right and bottom edges.
class RoiMask {
 public:
  RoiMask() = default;
  RoiMask(int grid_width, int grid_height, int block_size,
          std::vector<std::uint8_t> bits);

  /// Mask sized for a frame: grid = ceil(frame / block_size) per axis.
  static RoiMask for_frame(int frame_width, int frame_height, int block_size,
                           bool fill = false);

  int grid_width() const noexcept { return grid_width_; }
  int grid_height() const noexcept { return grid_height_; }
  int block_size() const noexcept { return block_size_; }
  std::size_t block_count() const noexcept { return bits_.size(); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  bool block(int bx, int by) const {
    return bits_[static_cast<std::size_t>(by) * grid_width_ + bx] != 0;
  }
  void set_block(int bx, int by, bool value) {
    bits_[static_cast<std::size_t>(by) * grid_width_ + bx] = value ? 1 : 0;
  }
  bool covers_pixel(int x, int y) const {
    return block(x / block_size_, y / block_size_);
  }

  /// True when the grid is exactly ceil(frame / block_size) on both axes.
  bool fits(int frame_width, int frame_height) const noexcept;

  std::size_t count_set() const noexcept;
  bool all_set() const noexcept { return count_set() == bits_.size(); }
  bool none_set() const noexcept { return count_set() == 0; }

  /// Fraction of frame pixels that fall in set blocks.
  double pixel_coverage(int frame_width, int frame_height) const;

  friend bool operator==(const RoiMask&, const RoiMask&) = default;

 private:
  int grid_width_ = 0;
  int grid_height_ = 0;
  int block_size_ = 1;
  std::vector<std::uint8_t> bits_;
};

}  // namespace motimem
