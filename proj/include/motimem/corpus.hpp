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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "motimem/frame.hpp"
#include "motimem/roi.hpp"

namespace motimem {

/// Synthetic sequence: noise-textured objects moving at constant velocity
/// (bouncing off the frame edges) over a textured gradient background.
/// Ground-truth boxes are the exact object rectangles.
struct CorpusConfig {
  int width = 192;
  int height = 144;
  int frames = 60;
  int channels = 1;
  int objects = 4;
  /// Object side lengths are drawn from [min_object, max_object] pixels.
  int min_object = 16;
  int max_object = 28;
  double max_speed = 3.0;
  std::uint64_t seed = 7;
};

struct Corpus {
  std::vector<Frame> frames;
  std::vector<FrameDetections> detections;
};

Corpus generate_corpus(const CorpusConfig& config);

/// Layout: frame_00000.pgm (or .ppm), ... plus detections.jsonl.
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus);
Corpus read_corpus(const std::filesystem::path& dir);

}  // namespace motimem
