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


#include <doctest.h>

#include <random>

#include "motimem/roi.hpp"
#include "oracle.hpp"

using namespace motimem;

namespace {

DetectionBox box(double x1, double y1, double x2, double y2, int cls = 0) {
  DetectionBox b;
  b.x1 = x1;
  b.y1 = y1;
  b.x2 = x2;
  b.y2 = y2;
  b.class_id = cls;
  return b;
}

FrameDetections dets(int frame, std::vector<DetectionBox> boxes) {
  return FrameDetections{frame, std::move(boxes)};
}

DetectionBox random_box(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> ux(-0.25 * w, 1.25 * w);
  std::uniform_real_distribution<double> uy(-0.25 * h, 1.25 * h);
  std::uniform_int_distribution<int> snap(0, 1);
  auto coord = [&](std::uniform_real_distribution<double>& d) {
    const double v = d(rng);
    // Half the coordinates land on integers so block edges get exercised.
    return snap(rng) ? std::round(v) : v;
  };
  double x1 = coord(ux), x2 = coord(ux), y1 = coord(uy), y2 = coord(uy);
  if (x1 > x2) std::swap(x1, x2);
  if (y1 > y2) std::swap(y1, y2);
  if (x1 == x2) x2 += 1.0;
  if (y1 == y2) y2 += 1.0;
  return box(x1, y1, x2, y2);
}

}  // namespace

TEST_CASE("iou basics") {
  CHECK(iou(box(0, 0, 10, 10), box(0, 0, 10, 10)) == doctest::Approx(1.0));
  CHECK(iou(box(0, 0, 10, 10), box(20, 20, 30, 30)) == 0.0);
  CHECK(iou(box(0, 0, 10, 10), box(10, 0, 20, 10)) == 0.0);
  CHECK(iou(box(0, 0, 10, 10), box(5, 0, 15, 10)) ==
        doctest::Approx(50.0 / 150.0));
}

TEST_CASE("match_tracks") {
  SUBCASE("identical lists pair by identity") {
    auto a = dets(0, {box(0, 0, 10, 10), box(50, 50, 70, 70),
                      box(100, 0, 120, 30)});
    auto m = match_tracks(a, a, 0.3);
    REQUIRE(m.size() == 3);
    for (auto [p, c] : m) CHECK(p == c);
  }
  SUBCASE("disjoint boxes do not match") {
    auto m = match_tracks(dets(0, {box(0, 0, 10, 10)}),
                          dets(1, {box(40, 40, 50, 50)}), 0.3);
    CHECK(m.empty());
  }
  SUBCASE("higher iou wins the contested box") {
    auto prev = dets(0, {box(0, 0, 10, 10)});
    auto curr = dets(1, {box(4, 0, 14, 10), box(1, 0, 11, 10)});
    auto m = match_tracks(prev, curr, 0.3);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == std::pair<int, int>{0, 1});
  }
  SUBCASE("greedy order matters and is deterministic") {
    // prev0 overlaps both; prev1 only overlaps curr0. Greedy takes the
    // best pair first, leaving prev1 unmatched.
    auto prev = dets(0, {box(0, 0, 10, 10), box(-6, 0, 4, 10)});
    auto curr = dets(1, {box(1, 0, 11, 10)});
    auto m = match_tracks(prev, curr, 0.1);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == std::pair<int, int>{0, 0});
  }
  SUBCASE("ties go to the lower prev index") {
    auto prev = dets(0, {box(0, 0, 10, 10), box(0, 0, 10, 10)});
    auto curr = dets(1, {box(0, 0, 10, 10)});
    auto m = match_tracks(prev, curr, 0.3);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == std::pair<int, int>{0, 0});
  }
  SUBCASE("classes never cross") {
    auto m = match_tracks(dets(0, {box(0, 0, 10, 10, 1)}),
                          dets(1, {box(0, 0, 10, 10, 2)}), 0.3);
    CHECK(m.empty());
  }
  SUBCASE("threshold is strict") {
    // IoU exactly 1/3 with threshold 1/3 is rejected.
    auto m = match_tracks(dets(0, {box(0, 0, 10, 10)}),
                          dets(1, {box(5, 0, 15, 10)}), 1.0 / 3.0);
    CHECK(m.empty());
  }
  SUBCASE("each box matched at most once on random inputs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      FrameDetections p{0, {}}, c{1, {}};
      for (int i = 0; i < 6; ++i) p.boxes.push_back(random_box(rng, 64, 64));
      for (int i = 0; i < 6; ++i) c.boxes.push_back(random_box(rng, 64, 64));
      auto m = match_tracks(p, c, 0.1);
      std::vector<int> pu(6, 0), cu(6, 0);
      for (auto [a, b] : m) {
        CHECK(iou(p.boxes[a], c.boxes[b]) > 0.1);
        CHECK(++pu[a] == 1);
        CHECK(++cu[b] == 1);
      }
    }
  }
}

TEST_CASE("velocity") {
  auto a = box(10, 10, 30, 30);
  auto s = estimate_velocity(a, a, 1, 1);
  CHECK(s.vx == 0.0);
  CHECK(s.vy == 0.0);

  auto moved = estimate_velocity(a, box(20, 6, 40, 26), 1, 5);
  CHECK(moved.vx == doctest::Approx(10.0));
  CHECK(moved.vy == doctest::Approx(-4.0));
  CHECK(moved.last_seen_frame == 5);

  auto gap = estimate_velocity(a, box(20, 6, 40, 26), 2, 5);
  CHECK(gap.vx == doctest::Approx(5.0));
  CHECK(gap.vy == doctest::Approx(-2.0));

  SUBCASE("new tracks start at rest") {
    auto prev = dets(0, {box(0, 0, 10, 10)});
    auto curr = dets(1, {box(2, 0, 12, 10), box(80, 80, 90, 90)});
    auto m = update_motion(prev, curr, 0.3);
    REQUIRE(m.size() == 2);
    CHECK(m[0].vx == doctest::Approx(2.0));
    CHECK(m[1].vx == 0.0);
    CHECK(m[1].vy == 0.0);
  }
}

TEST_CASE("propagate_box") {
  auto b = box(10, 10, 30, 30);
  CHECK(propagate_box(b, MotionState{0, 0, 0}, 3) == b);
  CHECK(propagate_box(b, MotionState{5, 0, 0}, 1) == box(15, 10, 35, 30));
  CHECK(propagate_box(b, MotionState{5, 7, 0}, 0) == b);
  auto p = propagate_box(b, MotionState{1.5, -2, 0}, 2);
  CHECK(p.width() == doctest::Approx(b.width()));
  CHECK(p.height() == doctest::Approx(b.height()));
  CHECK(p.x1 == doctest::Approx(13));
  CHECK(p.y1 == doctest::Approx(6));
}

TEST_CASE("inflate_box") {
  const FrameDims dims{100, 100};
  auto b = box(10, 10, 30, 30);
  CHECK(inflate_box(b, InflationPolicy{0, 0}, dims) == b);
  CHECK(inflate_box(b, InflationPolicy{5, 0}, dims) == box(5, 5, 35, 35));
  CHECK(inflate_box(box(0, 0, 10, 10), InflationPolicy{50, 0}, dims) ==
        box(0, 0, 60, 60));
  CHECK(inflate_box(box(90, 90, 100, 100), InflationPolicy{500, 0}, dims) ==
        box(0, 0, 100, 100));

  SUBCASE("relative margin dominates on large boxes") {
    auto big = inflate_box(box(0, 0, 200, 50), InflationPolicy{8, 0.1},
                           FrameDims{1000, 1000});
    CHECK(big.x2 == doctest::Approx(220));
    CHECK(big.y2 == doctest::Approx(58));
  }
  SUBCASE("result contains the box clipped to the frame") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0, 20), r(0, 0.5);
    for (int i = 0; i < 500; ++i) {
      auto src = random_box(rng, 100, 100);
      auto out = inflate_box(src, InflationPolicy{d(rng), r(rng)}, dims);
      CHECK(out.x1 <= std::clamp(src.x1, 0.0, 100.0));
      CHECK(out.y1 <= std::clamp(src.y1, 0.0, 100.0));
      CHECK(out.x2 >= std::clamp(src.x2, 0.0, 100.0));
      CHECK(out.y2 >= std::clamp(src.y2, 0.0, 100.0));
      CHECK(out.x1 >= 0.0);
      CHECK(out.y2 <= 100.0);
    }
  }
}

TEST_CASE("rasterize_mask examples") {
  const FrameDims dims{64, 64};
  CHECK(rasterize_mask({}, dims, 16).none_set());
  CHECK(rasterize_mask({box(0, 0, 64, 64)}, dims, 16).all_set());
  CHECK(rasterize_mask({box(-10, -10, 500, 500)}, dims, 16).all_set());

  auto m = rasterize_mask({box(0, 0, 16, 16)}, dims, 16);
  CHECK(m.grid_width() == 4);
  CHECK(m.grid_height() == 4);
  CHECK(m.count_set() == 1);
  CHECK(m.block(0, 0));

  // Touching a block edge is not overlap; crossing it by a sliver is.
  CHECK(rasterize_mask({box(16, 16, 32, 32)}, dims, 16).count_set() == 1);
  CHECK(rasterize_mask({box(15.5, 16, 32, 32)}, dims, 16).count_set() == 2);

  // Partial edge blocks on a frame that is not a block multiple.
  auto edge = rasterize_mask({box(60, 40, 70, 45)}, FrameDims{70, 45}, 16);
  CHECK(edge.grid_width() == 5);
  CHECK(edge.grid_height() == 3);
  CHECK(edge.count_set() == 2);
  CHECK(edge.block(3, 2));
  CHECK(edge.block(4, 2));
}

TEST_CASE("rasterize_mask matches the per-pixel reference") {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> dim(1, 80), blk(1, 24), nbox(0, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = dim(rng), h = dim(rng), b = blk(rng);
    std::vector<DetectionBox> boxes;
    for (int i = nbox(rng); i > 0; --i) boxes.push_back(random_box(rng, w, h));
    CHECK(rasterize_mask(boxes, FrameDims{w, h}, b) ==
          oracle::rasterize(boxes, w, h, b));
  }
}

TEST_CASE("larger margins never clear a block") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0, 30);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<DetectionBox> boxes{random_box(rng, 96, 72),
                                    random_box(rng, 96, 72)};
    const double lo = d(rng), hi = lo + d(rng);
    std::vector<DetectionBox> a, b;
    for (const auto& bx : boxes) {
      a.push_back(inflate_box(bx, InflationPolicy{lo, 0.1}, {96, 72}));
      b.push_back(inflate_box(bx, InflationPolicy{hi, 0.1}, {96, 72}));
    }
    auto ma = rasterize_mask(a, {96, 72}, 8);
    auto mb = rasterize_mask(b, {96, 72}, 8);
    for (std::size_t i = 0; i < ma.block_count(); ++i) {
      if (ma.bits()[i]) CHECK(mb.bits()[i]);
    }
  }
}

TEST_CASE("mask metadata stays compact") {
  for (int block : {4, 8, 16, 32}) {
    for (int bits : {8, 12, 16}) {
      const int w = 640, h = 480;
      auto m = RoiMask::for_frame(w, h, block);
      const double frame_bits = static_cast<double>(w) * h * bits;
      CHECK(static_cast<double>(m.block_count()) <=
            frame_bits / (static_cast<double>(block) * block * bits));
    }
  }
}

TEST_CASE("predict_mask") {
  const FrameDims dims{64, 64};
  RoiConfig cfg;
  cfg.block_size = 16;

  SUBCASE("empty detections fall back to all ones") {
    CHECK(predict_mask(dets(0, {}), {}, 1, dims, cfg).all_set());
    cfg.fallback = ColdStartFallback::kAllZeros;
    CHECK(predict_mask(dets(0, {}), {}, 1, dims, cfg).none_set());
  }
  SUBCASE("confidence floor removing every box triggers the fallback") {
    auto b = box(0, 0, 8, 8);
    b.confidence = 0.2;
    cfg.confidence_floor = 0.5;
    CHECK(predict_mask(dets(0, {b}), {}, 1, dims, cfg).all_set());
  }
  SUBCASE("stationary box without margin is its rasterization") {
    cfg.inflation = InflationPolicy{0, 0};
    std::vector<DetectionBox> boxes{box(3, 5, 20, 18)};
    CHECK(predict_mask(dets(0, boxes), {}, 1, dims, cfg) ==
          rasterize_mask(boxes, dims, 16));
  }
  SUBCASE("zero velocity and zero margin on random scenes") {
    cfg.inflation = InflationPolicy{0, 0};
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
      std::vector<DetectionBox> boxes{random_box(rng, 64, 64),
                                      random_box(rng, 64, 64)};
      std::vector<MotionState> still(2);
      CHECK(predict_mask(dets(3, boxes), still, 7, dims, cfg) ==
            oracle::rasterize(boxes, 64, 64, 16));
    }
  }
  SUBCASE("moving box is shifted by the frame gap then inflated") {
    cfg.inflation = InflationPolicy{4, 0};
    auto b = box(2, 2, 10, 10);
    MotionState v{10, 0, 0};
    auto m = predict_mask(dets(0, {b}), {v}, 2, dims, cfg);
    // Shifted by 20 px: (22,2,30,10); grown by 4: (18,0,34,14).
    auto expect = oracle::rasterize({box(18, 0, 34, 14)}, 64, 64, 16);
    CHECK(m == expect);
    CHECK(m.block(1, 0));
    CHECK(m.block(2, 0));
    CHECK_FALSE(m.block(0, 0));
  }
}
