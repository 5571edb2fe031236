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

#include "motimem/mask.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "motimem/errors.hpp"

namespace motimem {

RoiMask::RoiMask(int grid_width, int grid_height, int block_size,
                 std::vector<std::uint8_t> bits)
    : grid_width_(grid_width),
      grid_height_(grid_height),
      block_size_(block_size),
      bits_(std::move(bits)) {
  if (grid_width < 1 || grid_height < 1 || block_size < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mask grid and block size must be positive");
  }
  if (bits_.size() != static_cast<std::size_t>(grid_width) * grid_height) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mask has " + std::to_string(bits_.size()) +
                    " bits for a " + std::to_string(grid_width) + "x" +
                    std::to_string(grid_height) + " grid");
  }
  for (auto& b : bits_) {
    if (b > 1) {
      throw Error(ErrorKind::kInvalidParams, "mask bits must be 0 or 1");
    }
  }
}

RoiMask RoiMask::for_frame(int frame_width, int frame_height, int block_size,
                           bool fill) {
  if (block_size < 1) {
    throw Error(ErrorKind::kInvalidParams, "block size must be >= 1");
  }
  if (frame_width < 1 || frame_height < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "frame dimensions must be positive");
  }
  const int gw = (frame_width + block_size - 1) / block_size;
  const int gh = (frame_height + block_size - 1) / block_size;
  return RoiMask(gw, gh, block_size,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(gw) * gh,
                                           fill ? 1 : 0));
}

bool RoiMask::fits(int frame_width, int frame_height) const noexcept {
  return grid_width_ == (frame_width + block_size_ - 1) / block_size_ &&
         grid_height_ == (frame_height + block_size_ - 1) / block_size_;
}

std::size_t RoiMask::count_set() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

double RoiMask::pixel_coverage(int frame_width, int frame_height) const {
  if (!fits(frame_width, frame_height)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mask grid does not match frame dimensions");
  }
  std::uint64_t covered = 0;
  for (int by = 0; by < grid_height_; ++by) {
    const int h = std::min(block_size_, frame_height - by * block_size_);
    for (int bx = 0; bx < grid_width_; ++bx) {
      if (!block(bx, by)) continue;
      const int w = std::min(block_size_, frame_width - bx * block_size_);
      covered += static_cast<std::uint64_t>(w) * h;
    }
  }
  return static_cast<double>(covered) /
         (static_cast<double>(frame_width) * frame_height);
}

}  // namespace motimem
