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

#include <filesystem>
#include <random>
#include <string>

#include "generators.hpp"
#include "motimem/errors.hpp"
#include "motimem/stream.hpp"

using namespace motimem;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> bytes_of(std::string_view s) {
  return {s.begin(), s.end()};
}

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorKind::kIo, "unreachable");
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() /
           ("motimem_stream_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::vector<std::uint8_t> sample_container() {
  CodingParams p(8, 4, 2, 16);
  Frame f(64, 64, 1, 8);
  return format_encoded(
      encode_frame(f, RoiMask::for_frame(64, 64, 16, true), p));
}

}  // namespace

TEST_CASE("hand-built P5 file") {
  auto bytes = bytes_of("P5\n2 2\n255\n");
  for (std::uint8_t b : {10, 20, 30, 255}) bytes.push_back(b);
  Frame f = parse_pnm(bytes);
  CHECK(f.width() == 2);
  CHECK(f.height() == 2);
  CHECK(f.channels() == 1);
  CHECK(f.bit_width() == 8);
  CHECK(f.at(0, 0, 0) == 10);
  CHECK(f.at(1, 0, 0) == 20);
  CHECK(f.at(0, 1, 0) == 30);
  CHECK(f.at(1, 1, 0) == 255);
  CHECK(format_pnm(f) == bytes);
}

TEST_CASE("PNM header comments and whitespace") {
  auto bytes = bytes_of("P6 # rgb\n1\t1 # one pixel\n15\n");
  for (std::uint8_t b : {1, 2, 15}) bytes.push_back(b);
  Frame f = parse_pnm(bytes);
  CHECK(f.channels() == 3);
  CHECK(f.bit_width() == 4);
  CHECK(f.at(0, 0, 2) == 15);
}

TEST_CASE("16-bit PNM samples are big-endian") {
  auto bytes = bytes_of("P5\n2 1\n65535\n");
  for (std::uint8_t b : {0x12, 0x34, 0xFF, 0x00}) bytes.push_back(b);
  Frame f = parse_pnm(bytes);
  CHECK(f.bit_width() == 16);
  CHECK(f.at(0, 0, 0) == 0x1234);
  CHECK(f.at(1, 0, 0) == 0xFF00);
  CHECK(format_pnm(f) == bytes);
}

TEST_CASE("PNM errors") {
  SUBCASE("truncated payload reports the end of the file") {
    auto bytes = bytes_of("P5\n2 2\n255\n");
    bytes.push_back(1);
    bytes.push_back(2);
    auto e = error_of([&] { parse_pnm(bytes); });
    CHECK(e.kind() == ErrorKind::kParseError);
    REQUIRE(e.offset().has_value());
    CHECK(*e.offset() == bytes.size());
  }
  SUBCASE("bad magic") {
    auto e = error_of([] { parse_pnm(bytes_of("P2\n1 1\n255\n0")); });
    CHECK(e.kind() == ErrorKind::kParseError);
    CHECK(*e.offset() == 0);
  }
  SUBCASE("maxval not of the form 2^B - 1") {
    auto e = error_of([] { parse_pnm(bytes_of("P5\n1 1\n200\n\x01")); });
    CHECK(e.kind() == ErrorKind::kUnsupportedMaxval);
    CHECK(*e.offset() == 7);
  }
  SUBCASE("maxval disagrees with the requested width") {
    auto e = error_of([] { parse_pnm(bytes_of("P5\n1 1\n255\n\x01"), 10); });
    CHECK(e.kind() == ErrorKind::kUnsupportedMaxval);
  }
  SUBCASE("sample above maxval") {
    auto e = error_of([] { parse_pnm(bytes_of("P5\n1 1\n15\n\x10")); });
    CHECK(e.kind() == ErrorKind::kParseError);
    CHECK(*e.offset() == 10);
  }
  SUBCASE("missing dimension") {
    auto e = error_of([] { parse_pnm(bytes_of("P5\n2 x")); });
    CHECK(e.kind() == ErrorKind::kParseError);
    CHECK(*e.offset() == 5);
  }
}

TEST_CASE("container layout") {
  const auto bytes = sample_container();
  REQUIRE(bytes.size() == kContainerHeaderSize + 2 + 64 * 64);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "MTMM");
  CHECK(bytes[4] == 1);
  CHECK(bytes[5] == 8);
  CHECK(bytes[6] == 4);
  CHECK(bytes[7] == 2);
  CHECK(bytes[8] == 16);
  CHECK(bytes[9] == 0);
  CHECK(bytes[10] == 64);
  CHECK(bytes[14] == 64);
  CHECK(bytes[18] == 1);
  // 4x4 grid = 16 bits = 2 bytes of mask payload.
  CHECK(bytes[19] == 2);
  CHECK(bytes[20] == 0);
  CHECK(bytes[23] == 0xFF);
  CHECK(bytes[24] == 0xFF);
}

TEST_CASE("container mask padding and wide words") {
  // 3x3 grid = 9 bits; only block (0,0) set; 10-bit words take 2 bytes.
  CodingParams p(10, 3, 1, 4);
  Frame f(12, 12, 1, 10);
  f.set(0, 0, 0, 0x3FF);
  auto mask = RoiMask::for_frame(12, 12, 4);
  mask.set_block(0, 0, true);
  mask.set_block(2, 2, true);
  auto enc = encode_frame(f, mask, p);
  auto bytes = format_encoded(enc);
  REQUIRE(bytes.size() == kContainerHeaderSize + 2 + 144 * 2);
  CHECK(bytes[19] == 2);
  CHECK(bytes[23] == 0x80);
  CHECK(bytes[24] == 0x80);
  const unsigned w0 = bytes[25] | (bytes[26] << 8);
  CHECK(w0 == enc.words.at(0, 0, 0));
  CHECK(parse_encoded(bytes) == enc);
}

TEST_CASE("container errors") {
  const auto good = sample_container();
  SUBCASE("bad magic") {
    auto b = good;
    b[0] = 'X';
    CHECK(error_of([&] { parse_encoded(b); }).kind() == ErrorKind::kBadMagic);
  }
  SUBCASE("unsupported version") {
    auto b = good;
    b[4] = 2;
    CHECK(error_of([&] { parse_encoded(b); }).kind() ==
          ErrorKind::kUnsupportedVersion);
  }
  SUBCASE("truncated header") {
    std::vector<std::uint8_t> b(good.begin(), good.begin() + 10);
    CHECK(error_of([&] { parse_encoded(b); }).kind() ==
          ErrorKind::kLengthMismatch);
  }
  SUBCASE("truncated payload") {
    auto b = good;
    b.pop_back();
    CHECK(error_of([&] { parse_encoded(b); }).kind() ==
          ErrorKind::kLengthMismatch);
  }
  SUBCASE("trailing bytes") {
    auto b = good;
    b.push_back(0);
    CHECK(error_of([&] { parse_encoded(b); }).kind() ==
          ErrorKind::kLengthMismatch);
  }
  SUBCASE("mask length disagrees with the grid") {
    auto b = good;
    b[19] = 3;
    CHECK(error_of([&] { parse_encoded(b); }).kind() ==
          ErrorKind::kLengthMismatch);
  }
  SUBCASE("k equal to B") {
    auto b = good;
    b[6] = 8;
    auto e = error_of([&] { parse_encoded(b); });
    CHECK(e.kind() == ErrorKind::kParseError);
    CHECK(*e.offset() == 5);
  }
  SUBCASE("nonzero padding bits") {
    CodingParams p(8, 4, std::nullopt, 8);
    auto enc = encode_frame(Frame(24, 24, 1, 8),
                            RoiMask::for_frame(24, 24, 8, false), p);
    auto b = format_encoded(enc);
    b[kContainerHeaderSize + 1] |= 0x01;
    CHECK(error_of([&] { parse_encoded(b); }).kind() ==
          ErrorKind::kParseError);
  }
  SUBCASE("word above 2^B - 1") {
    auto b = format_encoded(encode_frame(
        Frame(2, 2, 1, 10), RoiMask::for_frame(2, 2, 16, true),
        CodingParams(10, 4, std::nullopt, 16)));
    b[kContainerHeaderSize + 1 + 1] = 0x04;
    CHECK(error_of([&] { parse_encoded(b); }).kind() ==
          ErrorKind::kParseError);
  }
}

TEST_CASE("detection records") {
  CHECK(parse_detections("").empty());
  CHECK(parse_detections("\n\n").empty());

  auto two = parse_detections(
      R"({"frame":0,"x1":1,"y1":2,"x2":3,"y2":4,"class":1,"conf":0.5,"track":7})"
      "\n"
      R"({"frame":0,"x1":5,"y1":6,"x2":9,"y2":8,"class":2,"conf":1,"track":null})"
      "\n");
  REQUIRE(two.size() == 1);
  CHECK(two[0].frame_index == 0);
  REQUIRE(two[0].boxes.size() == 2);
  CHECK(two[0].boxes[0].x2 == 3.0);
  CHECK(two[0].boxes[0].class_id == 1);
  CHECK(two[0].boxes[0].track_id == 7);
  CHECK_FALSE(two[0].boxes[1].track_id.has_value());

  SUBCASE("absent frames become empty entries") {
    auto gap = parse_detections(
        R"({"frame":2,"x1":0,"y1":0,"x2":1,"y2":1,"class":0,"conf":1})");
    REQUIRE(gap.size() == 3);
    CHECK(gap[0].boxes.empty());
    CHECK(gap[1].frame_index == 1);
    CHECK(gap[2].boxes.size() == 1);
  }
  SUBCASE("malformed line 3") {
    const std::string rec =
        R"({"frame":0,"x1":0,"y1":0,"x2":1,"y2":1,"class":0,"conf":1})";
    auto e = error_of(
        [&] { parse_detections(rec + "\n" + rec + "\n{\"frame\": 0,\n"); });
    CHECK(e.kind() == ErrorKind::kParseError);
    CHECK(*e.line() == 3);
  }
  SUBCASE("regressing frame index") {
    auto e = error_of([] {
      parse_detections(
          R"({"frame":1,"x1":0,"y1":0,"x2":1,"y2":1,"class":0,"conf":1})"
          "\n"
          R"({"frame":0,"x1":0,"y1":0,"x2":1,"y2":1,"class":0,"conf":1})");
    });
    CHECK(e.kind() == ErrorKind::kOrderError);
    CHECK(*e.line() == 2);
  }
  SUBCASE("invalid boxes and missing fields") {
    CHECK(error_of([] {
            parse_detections(
                R"({"frame":0,"x1":2,"y1":0,"x2":1,"y2":1,"class":0,"conf":1})");
          }).kind() == ErrorKind::kParseError);
    CHECK(error_of([] {
            parse_detections(R"({"frame":0,"x1":0,"y1":0,"x2":1,"y2":1})");
          }).kind() == ErrorKind::kParseError);
    CHECK(error_of([] { parse_detections("[1,2]"); }).kind() ==
          ErrorKind::kParseError);
  }
}

TEST_CASE("randomized roundtrips") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    Frame f = testgen::random_frame(rng);
    CHECK(parse_pnm(format_pnm(f)) == f);

    EncodedFrame enc = testgen::random_encoded(rng);
    auto bytes = format_encoded(enc);
    CHECK(parse_encoded(bytes) == enc);
    CHECK(format_encoded(parse_encoded(bytes)) == bytes);

    auto dets = testgen::random_detections(rng);
    auto text = format_detections(dets);
    CHECK(parse_detections(text) == dets);
    CHECK(format_detections(parse_detections(text)) == text);
  }
}

TEST_CASE("file wrappers") {
  TempDir dir;
  std::mt19937_64 rng(5);
  Frame f = testgen::random_frame(rng);
  write_frame(dir.path / "f.pnm", f);
  CHECK(read_frame(dir.path / "f.pnm") == f);
  CHECK(error_of([&] { read_frame(dir.path / "f.pnm", f.bit_width() % 16 + 1); })
            .kind() == ErrorKind::kUnsupportedMaxval);

  auto enc = testgen::random_encoded(rng);
  write_encoded(dir.path / "e.mtmm", enc);
  CHECK(read_encoded(dir.path / "e.mtmm") == enc);

  auto dets = testgen::random_detections(rng);
  write_detections(dir.path / "d.jsonl", dets);
  CHECK(read_detections(dir.path / "d.jsonl") == dets);

  CHECK(error_of([&] { read_frame(dir.path / "missing.pgm"); }).kind() ==
        ErrorKind::kIo);
}
