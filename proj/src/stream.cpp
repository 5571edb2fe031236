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

#include "motimem/stream.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "motimem/errors.hpp"

namespace motimem {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorKind::kIo, "write failed for " + path.string());
  }
}

// ---------------------------------------------------------------------------
// PNM

namespace {

class PnmHeaderReader {
 public:
  PnmHeaderReader(std::span<const std::uint8_t> bytes, std::size_t pos)
      : bytes_(bytes), pos_(pos) {}

  std::size_t pos() const noexcept { return pos_; }

  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t read_uint(const char* what) {
    skip_whitespace_and_comments();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 0xFFFFFFFFull) {
        throw Error::at_offset(ErrorKind::kParseError, start,
                               std::string(what) + " is too large");
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw Error::at_offset(ErrorKind::kParseError, pos_,
                             std::string("expected ") + what);
    }
    return v;
  }

  /// Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw Error::at_offset(ErrorKind::kParseError, pos_,
                             "expected whitespace before raster data");
    }
    ++pos_;
  }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

}  // namespace

Frame parse_pnm(std::span<const std::uint8_t> bytes,
                std::optional<int> expected_bit_width) {
  if (bytes.size() < 2 || bytes[0] != 'P' ||
      (bytes[1] != '5' && bytes[1] != '6')) {
    throw Error::at_offset(ErrorKind::kParseError, 0,
                           "not a binary PGM (P5) or PPM (P6) file");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;
  PnmHeaderReader body(bytes, 2);
  const auto width = body.read_uint("width");
  const auto height = body.read_uint("height");
  body.skip_whitespace_and_comments();
  const std::size_t maxval_offset = body.pos();
  const auto maxval = body.read_uint("maxval");
  body.expect_single_space();
  const std::size_t pos = body.pos();

  if (width == 0 || height == 0) {
    throw Error::at_offset(ErrorKind::kParseError, 2,
                           "image dimensions must be positive");
  }
  if (maxval == 0 || maxval > 65535 || !std::has_single_bit(maxval + 1)) {
    throw Error::at_offset(ErrorKind::kUnsupportedMaxval, maxval_offset,
                           "maxval " + std::to_string(maxval) +
                               " is not of the form 2^B - 1");
  }
  const int bit_width = std::countr_zero(maxval + 1);
  if (expected_bit_width && *expected_bit_width != bit_width) {
    throw Error::at_offset(
        ErrorKind::kUnsupportedMaxval, maxval_offset,
        "maxval " + std::to_string(maxval) + " does not match B=" +
            std::to_string(*expected_bit_width));
  }

  const std::size_t samples =
      static_cast<std::size_t>(width) * height * channels;
  const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
  const std::size_t needed = samples * bytes_per_sample;
  if (bytes.size() - pos < needed) {
    throw Error::at_offset(ErrorKind::kParseError, bytes.size(),
                           "pixel payload truncated: expected " +
                               std::to_string(needed) + " bytes, found " +
                               std::to_string(bytes.size() - pos));
  }
  std::vector<PixelWord> pixels(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t at = pos + i * bytes_per_sample;
    unsigned v = bytes[at];
    if (bytes_per_sample == 2) v = (v << 8) | bytes[at + 1];
    if (v > maxval) {
      throw Error::at_offset(ErrorKind::kParseError, at,
                             "sample exceeds maxval");
    }
    pixels[i] = static_cast<PixelWord>(v);
  }
  return Frame(static_cast<int>(width), static_cast<int>(height), channels,
               bit_width, std::move(pixels));
}

std::vector<std::uint8_t> format_pnm(const Frame& frame) {
  std::ostringstream header;
  header << (frame.channels() == 1 ? "P5" : "P6") << '\n'
         << frame.width() << ' ' << frame.height() << '\n'
         << frame.max_value() << '\n';
  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  const bool wide = frame.max_value() > 255;
  out.reserve(out.size() + frame.size() * (wide ? 2 : 1));
  for (PixelWord w : frame.pixels()) {
    if (wide) out.push_back(static_cast<std::uint8_t>(w >> 8));
    out.push_back(static_cast<std::uint8_t>(w & 0xFF));
  }
  return out;
}

Frame read_frame(const std::filesystem::path& path,
                 std::optional<int> expected_bit_width) {
  try {
    return parse_pnm(read_file(path), expected_bit_width);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw e.with_context(path.string());
  }
}

void write_frame(const std::filesystem::path& path, const Frame& frame) {
  write_file(path, format_pnm(frame));
}

// ---------------------------------------------------------------------------
// Container

namespace {

constexpr std::uint8_t kMagic[4] = {'M', 'T', 'M', 'M'};

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t at,
                     int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | in[at + i];
  return v;
}

std::size_t mask_payload_bytes(const RoiMask& mask) {
  return (mask.block_count() + 7) / 8;
}

}  // namespace

std::vector<std::uint8_t> format_encoded(const EncodedFrame& encoded) {
  const CodingParams& p = encoded.params;
  const Frame& f = encoded.words;
  const RoiMask& m = encoded.mask;
  if (!m.fits(f.width(), f.height()) || m.block_size() != p.block_size() ||
      f.bit_width() != p.bit_width()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "encoded frame parts disagree on dimensions");
  }
  if (p.block_size() > 0xFFFF) {
    throw Error(ErrorKind::kInvalidParams,
                "block size does not fit the 16-bit header field");
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kContainerVersion);
  out.push_back(static_cast<std::uint8_t>(p.bit_width()));
  out.push_back(static_cast<std::uint8_t>(p.retained_k()));
  out.push_back(static_cast<std::uint8_t>(p.tau()));
  put_le(out, static_cast<std::uint64_t>(p.block_size()), 2);
  put_le(out, static_cast<std::uint64_t>(f.width()), 4);
  put_le(out, static_cast<std::uint64_t>(f.height()), 4);
  out.push_back(static_cast<std::uint8_t>(f.channels()));
  const std::size_t mask_len = mask_payload_bytes(m);
  put_le(out, mask_len, 4);

  const std::size_t mask_start = out.size();
  out.resize(mask_start + mask_len, 0);
  const auto bits = m.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      out[mask_start + i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
  }

  const int word_bytes = (p.bit_width() + 7) / 8;
  out.reserve(out.size() + f.size() * word_bytes);
  for (PixelWord w : f.pixels()) put_le(out, w, word_bytes);
  return out;
}

EncodedFrame parse_encoded(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic),
                                      bytes.begin())) {
    throw Error::at_offset(ErrorKind::kBadMagic, 0,
                           "missing MTMM container magic");
  }
  if (bytes.size() < kContainerHeaderSize) {
    throw Error::at_offset(ErrorKind::kLengthMismatch, bytes.size(),
                           "container header truncated");
  }
  const int version = bytes[4];
  if (version != kContainerVersion) {
    throw Error::at_offset(ErrorKind::kUnsupportedVersion, 4,
                           "container version " + std::to_string(version) +
                               " is not supported");
  }
  const int bit_width = bytes[5];
  const int k = bytes[6];
  const int tau = bytes[7];
  const auto block = static_cast<int>(get_le(bytes, 8, 2));
  const auto width = get_le(bytes, 10, 4);
  const auto height = get_le(bytes, 14, 4);
  const int channels = bytes[18];
  const auto mask_len = get_le(bytes, 19, 4);

  std::optional<CodingParams> params;
  try {
    params.emplace(bit_width, k, tau, block);
  } catch (const Error& e) {
    throw Error::at_offset(ErrorKind::kParseError, 5,
                           std::string("invalid coding parameters: ") +
                               e.what());
  }
  if (width == 0 || height == 0 || width > 0x7FFFFFFF ||
      height > 0x7FFFFFFF) {
    throw Error::at_offset(ErrorKind::kParseError, 10,
                           "frame dimensions out of range");
  }
  if (channels != 1 && channels != 3) {
    throw Error::at_offset(ErrorKind::kParseError, 18,
                           "channels must be 1 or 3");
  }
  RoiMask mask = RoiMask::for_frame(static_cast<int>(width),
                                    static_cast<int>(height), block);
  const std::size_t expected_mask = mask_payload_bytes(mask);
  if (mask_len != expected_mask) {
    throw Error::at_offset(ErrorKind::kLengthMismatch, 19,
                           "mask_bytes_len " + std::to_string(mask_len) +
                               " but grid needs " +
                               std::to_string(expected_mask));
  }
  const int word_bytes = (bit_width + 7) / 8;
  const std::size_t samples =
      static_cast<std::size_t>(width) * height * channels;
  const std::size_t expected_total =
      kContainerHeaderSize + expected_mask + samples * word_bytes;
  if (bytes.size() != expected_total) {
    throw Error::at_offset(ErrorKind::kLengthMismatch,
                           std::min(bytes.size(), expected_total),
                           "container is " + std::to_string(bytes.size()) +
                               " bytes, layout requires " +
                               std::to_string(expected_total));
  }

  std::size_t at = kContainerHeaderSize;
  for (std::size_t i = 0; i < mask.block_count(); ++i) {
    const bool bit = (bytes[at + i / 8] >> (7 - i % 8)) & 1u;
    mask.set_block(static_cast<int>(i % mask.grid_width()),
                   static_cast<int>(i / mask.grid_width()), bit);
  }
  if (const std::size_t used = mask.block_count() % 8; used != 0) {
    const std::uint8_t pad = bytes[at + expected_mask - 1] &
                             static_cast<std::uint8_t>(0xFFu >> used);
    if (pad != 0) {
      throw Error::at_offset(ErrorKind::kParseError, at + expected_mask - 1,
                             "nonzero mask padding bits");
    }
  }
  at += expected_mask;

  const unsigned limit = (1u << bit_width) - 1u;
  std::vector<PixelWord> pixels(samples);
  for (std::size_t i = 0; i < samples; ++i, at += word_bytes) {
    const auto v = get_le(bytes, at, word_bytes);
    if (v > limit) {
      throw Error::at_offset(ErrorKind::kParseError, at,
                             "pixel word exceeds B-bit range");
    }
    pixels[i] = static_cast<PixelWord>(v);
  }
  return EncodedFrame{*params, std::move(mask),
                      Frame(static_cast<int>(width), static_cast<int>(height),
                            channels, bit_width, std::move(pixels))};
}

void write_encoded(const std::filesystem::path& path,
                   const EncodedFrame& encoded) {
  write_file(path, format_encoded(encoded));
}

EncodedFrame read_encoded(const std::filesystem::path& path) {
  try {
    return parse_encoded(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw e.with_context(path.string());
  }
}

// ---------------------------------------------------------------------------
// Detection records

namespace {

using nlohmann::json;

double number_field(const json& obj, const char* key, std::uint64_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw Error::at_line(ErrorKind::kParseError, line,
                         std::string("missing or non-numeric \"") + key +
                             "\"");
  }
  return it->get<double>();
}

std::int64_t integer_field(const json& obj, const char* key,
                           std::uint64_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw Error::at_line(ErrorKind::kParseError, line,
                         std::string("missing or non-integer \"") + key +
                             "\"");
  }
  return it->get<std::int64_t>();
}

}  // namespace

std::vector<FrameDetections> parse_detections(std::string_view text) {
  std::vector<FrameDetections> frames;
  std::uint64_t line_no = 0;
  std::int64_t last_frame = -1;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error::at_line(ErrorKind::kParseError, line_no,
                           std::string("malformed record: ") + e.what());
    }
    if (!obj.is_object()) {
      throw Error::at_line(ErrorKind::kParseError, line_no,
                           "record is not a JSON object");
    }
    const std::int64_t frame = integer_field(obj, "frame", line_no);
    if (frame < 0 || frame > 0x7FFFFFFF) {
      throw Error::at_line(ErrorKind::kParseError, line_no,
                           "frame index out of range");
    }
    if (frame < last_frame) {
      throw Error::at_line(ErrorKind::kOrderError, line_no,
                           "frame index " + std::to_string(frame) +
                               " follows " + std::to_string(last_frame));
    }
    last_frame = frame;

    DetectionBox box;
    box.x1 = number_field(obj, "x1", line_no);
    box.y1 = number_field(obj, "y1", line_no);
    box.x2 = number_field(obj, "x2", line_no);
    box.y2 = number_field(obj, "y2", line_no);
    const std::int64_t cls = integer_field(obj, "class", line_no);
    if (cls < INT32_MIN || cls > INT32_MAX) {
      throw Error::at_line(ErrorKind::kParseError, line_no,
                           "class id out of range");
    }
    box.class_id = static_cast<int>(cls);
    box.confidence = number_field(obj, "conf", line_no);
    if (const auto it = obj.find("track"); it != obj.end() && !it->is_null()) {
      const std::int64_t track = integer_field(obj, "track", line_no);
      if (track < INT32_MIN || track > INT32_MAX) {
        throw Error::at_line(ErrorKind::kParseError, line_no,
                             "track id out of range");
      }
      box.track_id = static_cast<int>(track);
    }
    if (!box.valid()) {
      throw Error::at_line(ErrorKind::kParseError, line_no,
                           "box needs x1<x2, y1<y2 and conf in [0,1]");
    }

    while (static_cast<std::int64_t>(frames.size()) <= frame) {
      frames.push_back(
          FrameDetections{static_cast<int>(frames.size()), {}});
    }
    frames[static_cast<std::size_t>(frame)].boxes.push_back(box);
  }
  return frames;
}

std::string format_detections(const std::vector<FrameDetections>& frames) {
  std::string out;
  for (const auto& fd : frames) {
    for (const auto& b : fd.boxes) {
      nlohmann::ordered_json obj;
      obj["frame"] = fd.frame_index;
      obj["x1"] = b.x1;
      obj["y1"] = b.y1;
      obj["x2"] = b.x2;
      obj["y2"] = b.y2;
      obj["class"] = b.class_id;
      obj["conf"] = b.confidence;
      obj["track"] = b.track_id ? nlohmann::ordered_json(*b.track_id)
                                : nlohmann::ordered_json(nullptr);
      out += obj.dump();
      out += '\n';
    }
  }
  return out;
}

std::vector<FrameDetections> read_detections(
    const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return parse_detections(std::string_view(
        reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

void write_detections(const std::filesystem::path& path,
                      const std::vector<FrameDetections>& frames) {
  const std::string text = format_detections(frames);
  write_file(path, std::span<const std::uint8_t>(
                       reinterpret_cast<const std::uint8_t*>(text.data()),
                       text.size()));
}

}  // namespace motimem
