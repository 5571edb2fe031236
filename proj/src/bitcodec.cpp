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

#include "motimem/bitcodec.hpp"

#include <string>

#include "motimem/errors.hpp"
#include "motimem/parallel.hpp"

namespace motimem {

CodingParams::CodingParams(int bit_width, int retained_k,
                           std::optional<int> tau, int block_size)
    : bit_width_(bit_width),
      retained_k_(retained_k),
      tau_(tau.value_or(retained_k / 2)),
      block_size_(block_size) {
  if (bit_width < 1 || bit_width > kMaxBitWidth) {
    throw Error(ErrorKind::kInvalidParams,
                "bit width B must be in [1, 16], got " +
                    std::to_string(bit_width));
  }
  // k = B would put the flag bit inside the inverted field.
  if (retained_k < 1 || retained_k > bit_width - 1) {
    throw Error(ErrorKind::kInvalidParams,
                "retained k must be in [1, B-1] = [1, " +
                    std::to_string(bit_width - 1) + "], got " +
                    std::to_string(retained_k));
  }
  if (tau_ < 0 || tau_ > retained_k) {
    throw Error(ErrorKind::kInvalidParams,
                "tau must be in [0, k] = [0, " + std::to_string(retained_k) +
                    "], got " + std::to_string(tau_));
  }
  if (block_size < 1) {
    throw Error(ErrorKind::kInvalidParams,
                "block size must be >= 1, got " + std::to_string(block_size));
  }
}

namespace {

void check_routing_inputs(const Frame& frame, const RoiMask& mask,
                          const CodingParams& params) {
  if (frame.bit_width() != params.bit_width()) {
    throw Error(ErrorKind::kInvalidParams,
                "frame is " + std::to_string(frame.bit_width()) +
                    "-bit but params specify B=" +
                    std::to_string(params.bit_width()));
  }
  if (mask.block_size() != params.block_size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mask block size " + std::to_string(mask.block_size()) +
                    " differs from params block size " +
                    std::to_string(params.block_size()));
  }
  if (!mask.fits(frame.width(), frame.height())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mask grid " + std::to_string(mask.grid_width()) + "x" +
                    std::to_string(mask.grid_height()) +
                    " does not cover a " + std::to_string(frame.width()) +
                    "x" + std::to_string(frame.height()) + " frame");
  }
}

}  // namespace

EncodedFrame encode_frame(const Frame& frame, const RoiMask& mask,
                          const CodingParams& params, int jobs) {
  check_routing_inputs(frame, mask, params);
  Frame out(frame.width(), frame.height(), frame.channels(),
            frame.bit_width());
  const auto src = frame.pixels();
  auto dst = out.pixels();
  const int channels = frame.channels();
  parallel_chunks(frame.height(), jobs, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < frame.width(); ++x) {
        const bool roi = mask.covers_pixel(x, y);
        const std::size_t base = frame.index(x, y, 0);
        for (int c = 0; c < channels; ++c) {
          dst[base + c] = roi ? encode_roi(src[base + c], params)
                              : encode_bg(src[base + c], params);
        }
      }
    }
  });
  return EncodedFrame{params, mask, std::move(out)};
}

Frame decode_frame(const EncodedFrame& encoded, int jobs) {
  const Frame& in = encoded.words;
  check_routing_inputs(in, encoded.mask, encoded.params);
  Frame out(in.width(), in.height(), in.channels(), in.bit_width());
  const auto src = in.pixels();
  auto dst = out.pixels();
  const CodingParams& params = encoded.params;
  // Both paths decode with the same bit operation; routing is kept explicit
  // so the two contracts can diverge without touching callers.
  parallel_chunks(in.height(), jobs, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < in.width(); ++x) {
        const bool roi = encoded.mask.covers_pixel(x, y);
        const std::size_t base = in.index(x, y, 0);
        for (int c = 0; c < in.channels(); ++c) {
          dst[base + c] = roi ? decode_roi(src[base + c], params)
                              : decode_bg(src[base + c], params);
        }
      }
    }
  });
  return out;
}

Frame truncate_frame(const Frame& frame, const CodingParams& params) {
  if (frame.bit_width() != params.bit_width()) {
    throw Error(ErrorKind::kInvalidParams,
                "frame bit width differs from params");
  }
  Frame out = frame;
  for (auto& w : out.pixels()) w = truncate_k(w, params);
  return out;
}

}  // namespace motimem
