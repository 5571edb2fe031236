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

// RoI mask prediction from the previous frame's detections: greedy IoU
// track matching, order-1 constant-velocity propagation, box inflation and
// block rasterization.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "motimem/mask.hpp"

namespace motimem {

/// Axis-aligned box in continuous pixel coordinates. Pixel (px, py) spans
/// [px, px+1) x [py, py+1).
struct DetectionBox {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  int class_id = 0;
  double confidence = 1.0;
  std::optional<int> track_id;

  double width() const noexcept { return x2 - x1; }
  double height() const noexcept { return y2 - y1; }
  double center_x() const noexcept { return 0.5 * (x1 + x2); }
  double center_y() const noexcept { return 0.5 * (y1 + y2); }
  /// x1 < x2, y1 < y2, confidence in [0, 1], all finite.
  bool valid() const noexcept;

  friend bool operator==(const DetectionBox&,
                         const DetectionBox&) = default;
};

struct FrameDetections {
  int frame_index = 0;
  std::vector<DetectionBox> boxes;

  friend bool operator==(const FrameDetections&,
                         const FrameDetections&) = default;
};

struct FrameDims {
  int width = 0;
  int height = 0;
};

/// Per-box motion estimate, aligned index-for-index with the boxes of the
/// FrameDetections it was estimated for. Velocity is in pixels per frame.
struct MotionState {
  double vx = 0.0;
  double vy = 0.0;
  int last_seen_frame = 0;

  friend bool operator==(const MotionState&, const MotionState&) = default;
};

/// Per-side margin: max(abs_floor, rel_fraction * side length).
struct InflationPolicy {
  double abs_floor = 8.0;
  double rel_fraction = 0.1;
};

enum class ColdStartFallback { kAllOnes, kAllZeros };

struct RoiConfig {
  int block_size = 16;
  InflationPolicy inflation;
  double iou_threshold = 0.3;
  /// Boxes below this confidence are left out of the mask.
  double confidence_floor = 0.0;
  ColdStartFallback fallback = ColdStartFallback::kAllOnes;
};

double iou(const DetectionBox& a, const DetectionBox& b) noexcept;

/// Greedy one-to-one matching of same-class pairs by descending IoU, keeping
/// only pairs with IoU > iou_threshold. Ties go to the lower prev index, then
/// the lower curr index. Returns (prev_index, curr_index) pairs in the order
/// they were accepted.
std::vector<std::pair<int, int>> match_tracks(const FrameDetections& prev,
                                              const FrameDetections& curr,
                                              double iou_threshold);

/// Velocity from one matched observation pair; frame_gap <= 0 yields zero.
MotionState estimate_velocity(const DetectionBox& prev,
                              const DetectionBox& curr, int frame_gap,
                              int curr_frame);

/// Motion table for `curr`: matched boxes get the displacement from their
/// predecessor, unmatched (new) boxes get zero velocity.
std::vector<MotionState> update_motion(const FrameDetections& prev,
                                       const FrameDetections& curr,
                                       double iou_threshold);

/// Shifts all four coordinates by dt * v.
DetectionBox propagate_box(const DetectionBox& box, const MotionState& motion,
                           double dt) noexcept;

/// Grows each side by the policy margin and clamps to [0, W] x [0, H]. A box
/// entirely outside the frame clamps to zero area.
DetectionBox inflate_box(const DetectionBox& box,
                         const InflationPolicy& policy,
                         FrameDims frame) noexcept;

/// Sets every block whose pixel extent overlaps some box with positive area.
RoiMask rasterize_mask(const std::vector<DetectionBox>& boxes, FrameDims frame,
                       int block_size);

/// Mask for frame `target_frame` from the detections of an earlier frame:
/// propagate by (target_frame - prev.frame_index) frames, inflate,
/// rasterize. Without usable detections the cold-start fallback is returned.
/// `motion` may be empty (zero velocity) or sized like prev.boxes.
RoiMask predict_mask(const FrameDetections& prev,
                     const std::vector<MotionState>& motion, int target_frame,
                     FrameDims frame, const RoiConfig& config);

}  // namespace motimem
