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

#include "motimem/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "motimem/errors.hpp"
#include "motimem/stream.hpp"

namespace motimem {

namespace {

struct MovingObject {
  double x, y;  // top-left
  double vx, vy;
  int w, h;
  int class_id;
  int base[3];
  int texture_amp;
};

int clamp_byte(double v) {
  return static_cast<int>(std::clamp(std::lround(v), 0L, 255L));
}

std::string frame_name(int index, int channels) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05d.%s", index,
                channels == 1 ? "pgm" : "ppm");
  return buf;
}

}  // namespace

Corpus generate_corpus(const CorpusConfig& config) {
  if (config.width < 1 || config.height < 1 || config.frames < 0 ||
      (config.channels != 1 && config.channels != 3) || config.objects < 0 ||
      config.min_object < 1 || config.max_object < config.min_object ||
      config.max_object > std::min(config.width, config.height)) {
    throw Error(ErrorKind::kInvalidParams, "invalid corpus configuration");
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  // Static background texture parameters.
  const double phase_x = unit(rng) * 2.0 * std::numbers::pi;
  const double phase_y = unit(rng) * 2.0 * std::numbers::pi;
  const double tint[3] = {0.0, 12.0 * unit(rng) - 6.0, 12.0 * unit(rng) - 6.0};

  std::vector<MovingObject> objects;
  for (int i = 0; i < config.objects; ++i) {
    MovingObject o{};
    o.w = uniform_int(config.min_object, config.max_object);
    o.h = uniform_int(config.min_object, config.max_object);
    o.x = unit(rng) * (config.width - o.w);
    o.y = unit(rng) * (config.height - o.h);
    const double angle = unit(rng) * 2.0 * std::numbers::pi;
    const double speed = (0.25 + 0.75 * unit(rng)) * config.max_speed;
    o.vx = speed * std::cos(angle);
    o.vy = speed * std::sin(angle);
    o.class_id = uniform_int(0, 2);
    for (int& b : o.base) b = uniform_int(40, 230);
    o.texture_amp = uniform_int(10, 40);
    objects.push_back(o);
  }

  Corpus corpus;
  std::normal_distribution<double> grain(0.0, 10.0);
  for (int t = 0; t < config.frames; ++t) {
    Frame frame(config.width, config.height, config.channels, 8);
    for (int y = 0; y < config.height; ++y) {
      for (int x = 0; x < config.width; ++x) {
        const double gradient = 110.0 + 70.0 * x / config.width +
                                30.0 * y / config.height;
        const double texture = 18.0 * std::sin(0.21 * x + phase_x) *
                               std::cos(0.17 * y + phase_y);
        const double noise = grain(rng);
        for (int c = 0; c < config.channels; ++c) {
          frame.set(x, y, c,
                    static_cast<PixelWord>(
                        clamp_byte(gradient + texture + noise + tint[c])));
        }
      }
    }

    FrameDetections det{t, {}};
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const MovingObject& o = objects[i];
      const int x0 = static_cast<int>(std::lround(o.x));
      const int y0 = static_cast<int>(std::lround(o.y));
      for (int y = y0; y < y0 + o.h; ++y) {
        for (int x = x0; x < x0 + o.w; ++x) {
          // Object-local checker texture plus grain, so it moves rigidly.
          const bool cell = (((x - x0) / 4) + ((y - y0) / 4)) % 2 == 0;
          const double v = (cell ? 1 : -1) * o.texture_amp + grain(rng);
          for (int c = 0; c < config.channels; ++c) {
            frame.set(x, y, c,
                      static_cast<PixelWord>(clamp_byte(o.base[c] + v)));
          }
        }
      }
      DetectionBox box;
      box.x1 = x0;
      box.y1 = y0;
      box.x2 = x0 + o.w;
      box.y2 = y0 + o.h;
      box.class_id = o.class_id;
      box.confidence = 1.0;
      box.track_id = static_cast<int>(i);
      det.boxes.push_back(box);
    }
    corpus.frames.push_back(std::move(frame));
    corpus.detections.push_back(std::move(det));

    for (MovingObject& o : objects) {
      o.x += o.vx;
      o.y += o.vy;
      const double max_x = config.width - o.w;
      const double max_y = config.height - o.h;
      if (o.x < 0.0 || o.x > max_x) {
        o.vx = -o.vx;
        o.x = std::clamp(o.x, 0.0, max_x);
      }
      if (o.y < 0.0 || o.y > max_y) {
        o.vy = -o.vy;
        o.y = std::clamp(o.y, 0.0, max_y);
      }
    }
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  for (std::size_t i = 0; i < corpus.frames.size(); ++i) {
    const Frame& f = corpus.frames[i];
    write_frame(dir / frame_name(static_cast<int>(i), f.channels()), f);
  }
  write_detections(dir / "detections.jsonl", corpus.detections);
}

Corpus read_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kIo, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    const auto ext = entry.path().extension().string();
    if (name.rfind("frame_", 0) == 0 && (ext == ".pgm" || ext == ".ppm")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  Corpus corpus;
  for (const auto& f : files) corpus.frames.push_back(read_frame(f));
  const auto det_path = dir / "detections.jsonl";
  if (std::filesystem::exists(det_path)) {
    corpus.detections = read_detections(det_path);
  }
  return corpus;
}

}  // namespace motimem
