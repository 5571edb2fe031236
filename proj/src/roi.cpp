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

#include "motimem/roi.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "motimem/errors.hpp"

namespace motimem {

bool DetectionBox::valid() const noexcept {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
         std::isfinite(y2) && x1 < x2 && y1 < y2 && confidence >= 0.0 &&
         confidence <= 1.0;
}

double iou(const DetectionBox& a, const DetectionBox& b) noexcept {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.width() * a.height() + b.width() * b.height() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<std::pair<int, int>> match_tracks(const FrameDetections& prev,
                                              const FrameDetections& curr,
                                              double iou_threshold) {
  struct Candidate {
    double iou;
    int prev;
    int curr;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < static_cast<int>(prev.boxes.size()); ++i) {
    for (int j = 0; j < static_cast<int>(curr.boxes.size()); ++j) {
      if (prev.boxes[i].class_id != curr.boxes[j].class_id) continue;
      const double v = iou(prev.boxes[i], curr.boxes[j]);
      if (v > iou_threshold) candidates.push_back({v, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(b.iou, a.prev, a.curr) <
                     std::tie(a.iou, b.prev, b.curr);
            });

  std::vector<bool> prev_used(prev.boxes.size(), false);
  std::vector<bool> curr_used(curr.boxes.size(), false);
  std::vector<std::pair<int, int>> matches;
  for (const auto& c : candidates) {
    if (prev_used[c.prev] || curr_used[c.curr]) continue;
    prev_used[c.prev] = true;
    curr_used[c.curr] = true;
    matches.emplace_back(c.prev, c.curr);
  }
  return matches;
}

MotionState estimate_velocity(const DetectionBox& prev,
                              const DetectionBox& curr, int frame_gap,
                              int curr_frame) {
  MotionState m;
  m.last_seen_frame = curr_frame;
  if (frame_gap > 0) {
    m.vx = (curr.center_x() - prev.center_x()) / frame_gap;
    m.vy = (curr.center_y() - prev.center_y()) / frame_gap;
  }
  return m;
}

std::vector<MotionState> update_motion(const FrameDetections& prev,
                                       const FrameDetections& curr,
                                       double iou_threshold) {
  std::vector<MotionState> motion(curr.boxes.size(),
                                  MotionState{0.0, 0.0, curr.frame_index});
  const int gap = curr.frame_index - prev.frame_index;
  for (const auto& [pi, ci] : match_tracks(prev, curr, iou_threshold)) {
    motion[ci] = estimate_velocity(prev.boxes[pi], curr.boxes[ci], gap,
                                   curr.frame_index);
  }
  return motion;
}

DetectionBox propagate_box(const DetectionBox& box, const MotionState& motion,
                           double dt) noexcept {
  DetectionBox out = box;
  const double dx = dt * motion.vx;
  const double dy = dt * motion.vy;
  out.x1 += dx;
  out.x2 += dx;
  out.y1 += dy;
  out.y2 += dy;
  return out;
}

DetectionBox inflate_box(const DetectionBox& box,
                         const InflationPolicy& policy,
                         FrameDims frame) noexcept {
  const double dx = std::max(policy.abs_floor,
                             policy.rel_fraction * box.width());
  const double dy = std::max(policy.abs_floor,
                             policy.rel_fraction * box.height());
  const double w = frame.width;
  const double h = frame.height;
  DetectionBox out = box;
  out.x1 = std::clamp(box.x1 - dx, 0.0, w);
  out.x2 = std::clamp(box.x2 + dx, 0.0, w);
  out.y1 = std::clamp(box.y1 - dy, 0.0, h);
  out.y2 = std::clamp(box.y2 + dy, 0.0, h);
  return out;
}

RoiMask rasterize_mask(const std::vector<DetectionBox>& boxes, FrameDims frame,
                       int block_size) {
  RoiMask mask = RoiMask::for_frame(frame.width, frame.height, block_size);
  const double w = frame.width;
  const double h = frame.height;
  for (const auto& b : boxes) {
    const double x1 = std::clamp(b.x1, 0.0, w);
    const double x2 = std::clamp(b.x2, 0.0, w);
    const double y1 = std::clamp(b.y1, 0.0, h);
    const double y2 = std::clamp(b.y2, 0.0, h);
    if (!(x1 < x2) || !(y1 < y2)) continue;
    // Block bx overlaps [x1, x2) iff bx*bs < x2 and (bx+1)*bs > x1.
    const int bx0 = static_cast<int>(std::floor(x1 / block_size));
    const int bx1 = static_cast<int>(std::ceil(x2 / block_size)) - 1;
    const int by0 = static_cast<int>(std::floor(y1 / block_size));
    const int by1 = static_cast<int>(std::ceil(y2 / block_size)) - 1;
    for (int by = by0; by <= by1; ++by) {
      for (int bx = bx0; bx <= bx1; ++bx) mask.set_block(bx, by, true);
    }
  }
  return mask;
}

RoiMask predict_mask(const FrameDetections& prev,
                     const std::vector<MotionState>& motion, int target_frame,
                     FrameDims frame, const RoiConfig& config) {
  if (!motion.empty() && motion.size() != prev.boxes.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "motion table does not align with detections");
  }
  std::vector<DetectionBox> inflated;
  inflated.reserve(prev.boxes.size());
  const double dt = std::max(0, target_frame - prev.frame_index);
  for (std::size_t i = 0; i < prev.boxes.size(); ++i) {
    const DetectionBox& box = prev.boxes[i];
    if (box.confidence < config.confidence_floor) continue;
    const MotionState m = motion.empty() ? MotionState{} : motion[i];
    inflated.push_back(
        inflate_box(propagate_box(box, m, dt), config.inflation, frame));
  }
  if (inflated.empty()) {
    return RoiMask::for_frame(frame.width, frame.height, config.block_size,
                              config.fallback == ColdStartFallback::kAllOnes);
  }
  return rasterize_mask(inflated, frame, config.block_size);
}

}  // namespace motimem
