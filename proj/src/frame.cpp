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

#include "motimem/frame.hpp"

#include <string>
#include <utility>

#include "motimem/errors.hpp"

namespace motimem {

namespace {

void check_shape(int width, int height, int channels, int bit_width) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "frame dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::kDimensionMismatch,
                "frame must have 1 or 3 channels, got " +
                    std::to_string(channels));
  }
  if (bit_width < 1 || bit_width > kMaxBitWidth) {
    throw Error(ErrorKind::kInvalidParams,
                "bit width must be in [1, 16], got " +
                    std::to_string(bit_width));
  }
}

}  // namespace

Frame::Frame(int width, int height, int channels, int bit_width)
    : width_(width),
      height_(height),
      channels_(channels),
      bit_width_(bit_width) {
  check_shape(width, height, channels, bit_width);
  pixels_.assign(static_cast<std::size_t>(width) * height * channels, 0);
}

Frame::Frame(int width, int height, int channels, int bit_width,
             std::vector<PixelWord> pixels)
    : width_(width),
      height_(height),
      channels_(channels),
      bit_width_(bit_width),
      pixels_(std::move(pixels)) {
  check_shape(width, height, channels, bit_width);
  const std::size_t expected =
      static_cast<std::size_t>(width) * height * channels;
  if (pixels_.size() != expected) {
    throw Error(ErrorKind::kDimensionMismatch,
                "pixel count " + std::to_string(pixels_.size()) +
                    " does not match " + std::to_string(expected));
  }
  const PixelWord limit = max_value();
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    if (pixels_[i] > limit) {
      throw Error(ErrorKind::kInvalidParams,
                  "pixel " + std::to_string(i) + " value " +
                      std::to_string(pixels_[i]) + " exceeds " +
                      std::to_string(bit_width) + "-bit range");
    }
  }
}

void Frame::set(int x, int y, int c, PixelWord value) {
  if (value > max_value()) {
    throw Error(ErrorKind::kInvalidParams,
                "value " + std::to_string(value) + " exceeds " +
                    std::to_string(bit_width_) + "-bit range");
  }
  pixels_[index(x, y, c)] = value;
}

}  // namespace motimem
