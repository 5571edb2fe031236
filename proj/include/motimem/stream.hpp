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

// File formats:
//
//  * Frames: binary PNM. P5 for one channel, P6 for three; maxval must be
//    2^B - 1. Samples are one byte when maxval < 256, otherwise two bytes
//    big-endian.
//
//  * Encoded frames ("MTMM" container), all integers little-endian:
//
//      offset size field
//      0      4    magic "MTMM"
//      4      1    version (1)
//      5      1    bit width B
//      6      1    retained k
//      7      1    tau
//      8      2    block size
//      10     4    width
//      14     4    height
//      18     1    channels
//      19     4    mask_bytes_len = ceil(grid_w * grid_h / 8)
//      23     ..   mask bits, row-major, MSB-first, zero-padded
//      ..     ..   pixel words, row-major channel-interleaved,
//                  ceil(B/8) bytes each, little-endian
//
//  * Detections: one JSON object per line,
//      {"frame":0,"x1":..,"y1":..,"x2":..,"y2":..,"class":0,"conf":..,
//       "track":null}

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motimem/bitcodec.hpp"
#include "motimem/frame.hpp"
#include "motimem/roi.hpp"

namespace motimem {

inline constexpr std::size_t kContainerHeaderSize = 23;
inline constexpr std::uint8_t kContainerVersion = 1;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);

/// Parses a binary PNM image. When `expected_bit_width` is set, the file's
/// maxval must equal 2^B - 1 for that B; otherwise B is inferred from maxval.
Frame parse_pnm(std::span<const std::uint8_t> bytes,
                std::optional<int> expected_bit_width = std::nullopt);
std::vector<std::uint8_t> format_pnm(const Frame& frame);

Frame read_frame(const std::filesystem::path& path,
                 std::optional<int> expected_bit_width = std::nullopt);
void write_frame(const std::filesystem::path& path, const Frame& frame);

std::vector<std::uint8_t> format_encoded(const EncodedFrame& encoded);
EncodedFrame parse_encoded(std::span<const std::uint8_t> bytes);

void write_encoded(const std::filesystem::path& path,
                   const EncodedFrame& encoded);
EncodedFrame read_encoded(const std::filesystem::path& path);

/// Groups records by frame; the result holds one entry for every frame index
/// from 0 to the largest index seen, empty where the file has no records.
std::vector<FrameDetections> parse_detections(std::string_view text);
std::string format_detections(const std::vector<FrameDetections>& frames);

std::vector<FrameDetections> read_detections(
    const std::filesystem::path& path);
void write_detections(const std::filesystem::path& path,
                      const std::vector<FrameDetections>& frames);

}  // namespace motimem
