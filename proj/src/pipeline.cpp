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

#include "motimem/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "motimem/errors.hpp"

namespace motimem {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kMotiMem:
      return "motimem";
    case Variant::kGlobalK:
      return "global_k";
    case Variant::kUniformK:
      return "uniform_k";
    case Variant::kRaw:
      return "raw";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

FrameDetections oracle_detector(const FrameDetections& ground_truth,
                                FrameDims frame,
                                const DetectorStubConfig& config,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FrameDetections out{ground_truth.frame_index, {}};
  const double w = frame.width;
  const double h = frame.height;
  for (const DetectionBox& gt : ground_truth.boxes) {
    if (unit(rng) < config.dropout) continue;
    DetectionBox b = gt;
    if (config.sigma_px > 0.0) {
      std::normal_distribution<double> jitter(0.0, config.sigma_px);
      b.x1 += std::round(jitter(rng));
      b.y1 += std::round(jitter(rng));
      b.x2 += std::round(jitter(rng));
      b.y2 += std::round(jitter(rng));
    }
    b.x1 = std::clamp(b.x1, 0.0, w);
    b.x2 = std::clamp(b.x2, 0.0, w);
    b.y1 = std::clamp(b.y1, 0.0, h);
    b.y2 = std::clamp(b.y2, 0.0, h);
    if (b.x1 < b.x2 && b.y1 < b.y2) out.boxes.push_back(b);
  }
  return out;
}

Aggregates aggregate(std::span<const FrameRecord> rows) {
  Aggregates a;
  if (rows.empty()) return a;
  double nbd_sum = 0.0;
  std::size_t nbd_count = 0;
  for (const FrameRecord& r : rows) {
    if (r.report.nbd) {
      nbd_sum += *r.report.nbd;
      ++nbd_count;
    }
    a.mean_raw_density += r.report.raw_bit1_density;
    a.mean_enc_density += r.report.enc_bit1_density;
    a.mean_alpha_raw += r.report.alpha_raw;
    a.mean_alpha_enc += r.report.alpha_enc;
    a.mean_mse += r.report.mse;
    a.mean_psnr_db += r.report.psnr_db;
    a.mean_mask_coverage += r.mask_coverage;
  }
  const double n = static_cast<double>(rows.size());
  if (nbd_count > 0) a.mean_nbd = nbd_sum / static_cast<double>(nbd_count);
  a.mean_raw_density /= n;
  a.mean_enc_density /= n;
  a.mean_alpha_raw /= n;
  a.mean_alpha_enc /= n;
  a.mean_mse /= n;
  a.mean_psnr_db /= n;
  a.mean_mask_coverage /= n;
  return a;
}

namespace {

void check_alignment(std::span<const Frame> frames,
                     std::span<const FrameDetections> ground_truth,
                     const CodingParams& params) {
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (ground_truth[i].frame_index != static_cast<int>(i)) {
      throw Error(ErrorKind::kAlignmentError,
                  "detection entry " + std::to_string(i) +
                      " carries frame index " +
                      std::to_string(ground_truth[i].frame_index));
    }
    if (i >= frames.size() && !ground_truth[i].boxes.empty()) {
      throw Error(ErrorKind::kAlignmentError,
                  "detections reference frame " + std::to_string(i) +
                      " but only " + std::to_string(frames.size()) +
                      " frames were given");
    }
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].bit_width() != params.bit_width()) {
      throw Error(ErrorKind::kInvalidParams,
                  "frame " + std::to_string(i) + " is " +
                      std::to_string(frames[i].bit_width()) +
                      "-bit but params specify B=" +
                      std::to_string(params.bit_width()));
    }
  }
}

}  // namespace

RunSummary run_closed_loop(std::span<const Frame> frames,
                           std::span<const FrameDetections> ground_truth,
                           const PipelineConfig& config, Variant variant) {
  const CodingParams& params = config.params;
  check_alignment(frames, ground_truth, params);
  RoiConfig roi = config.roi;
  roi.block_size = params.block_size();

  RunSummary run;
  run.variant = variant;
  run.k = params.retained_k();
  run.tau = params.tau();
  run.rows.reserve(frames.size());
  run.masks.reserve(frames.size());

  std::mt19937_64 rng(config.seed);
  std::optional<FrameDetections> prev;
  std::vector<MotionState> motion;

  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Frame& frame = frames[t];
    const FrameDims dims{frame.width(), frame.height()};
    const int index = static_cast<int>(t);

    Frame encoded;
    Frame decoded;
    RoiMask mask;
    double coverage = 0.0;
    switch (variant) {
      case Variant::kMotiMem: {
        mask = prev ? predict_mask(*prev, motion, index, dims, roi)
                    : RoiMask::for_frame(
                          dims.width, dims.height, roi.block_size,
                          roi.fallback == ColdStartFallback::kAllOnes);
        EncodedFrame enc = encode_frame(frame, mask, params, config.jobs);
        decoded = decode_frame(enc, config.jobs);
        encoded = std::move(enc.words);
        coverage = mask.pixel_coverage(dims.width, dims.height);
        break;
      }
      case Variant::kGlobalK: {
        mask = RoiMask::for_frame(dims.width, dims.height, roi.block_size);
        EncodedFrame enc = encode_frame(frame, mask, params, config.jobs);
        decoded = decode_frame(enc, config.jobs);
        encoded = std::move(enc.words);
        break;
      }
      case Variant::kUniformK:
        mask = RoiMask::for_frame(dims.width, dims.height, roi.block_size);
        encoded = truncate_frame(frame, params);
        decoded = encoded;
        break;
      case Variant::kRaw:
        mask = RoiMask::for_frame(dims.width, dims.height, roi.block_size);
        encoded = frame;
        decoded = frame;
        coverage = 1.0;
        break;
    }

    FrameRecord rec;
    rec.variant = variant;
    rec.k = params.retained_k();
    rec.tau = params.tau();
    rec.report =
        measure_activity(index, frame, encoded, decoded, config.word_width);
    rec.mask_coverage = coverage;
    run.rows.push_back(rec);
    run.masks.push_back(std::move(mask));

    if (variant == Variant::kMotiMem) {
      // The detector sees frame t only after it has been encoded; its
      // output is the control input for frame t+1.
      const FrameDetections empty{index, {}};
      const FrameDetections& gt =
          t < ground_truth.size() ? ground_truth[t] : empty;
      FrameDetections detected =
          oracle_detector(gt, dims, config.detector, rng);
      motion = prev ? update_motion(*prev, detected, roi.iou_threshold)
                    : std::vector<MotionState>(
                          detected.boxes.size(), MotionState{0, 0, index});
      prev = std::move(detected);
    }
  }
  run.means = aggregate(run.rows);
  return run;
}

std::vector<RunSummary> run_sweep(std::span<const Frame> frames,
                                  std::span<const FrameDetections> ground_truth,
                                  const PipelineConfig& config,
                                  Variant variant) {
  const int bits = config.params.bit_width();
  if (config.sweep_k_min < 1 || config.sweep_k_max > bits - 1 ||
      config.sweep_k_min > config.sweep_k_max) {
    throw Error(ErrorKind::kInvalidParams,
                "sweep range [" + std::to_string(config.sweep_k_min) + ", " +
                    std::to_string(config.sweep_k_max) +
                    "] must lie within [1, B-1]");
  }
  std::vector<RunSummary> runs;
  for (int k = config.sweep_k_min; k <= config.sweep_k_max; ++k) {
    PipelineConfig point = config;
    point.params = CodingParams(bits, k, std::nullopt,
                                config.params.block_size());
    runs.push_back(run_closed_loop(frames, ground_truth, point, variant));
  }
  return runs;
}

std::vector<RunSummary> compare_variants(
    std::span<const Frame> frames,
    std::span<const FrameDetections> ground_truth,
    const PipelineConfig& config) {
  std::vector<RunSummary> runs;
  for (Variant v : kAllVariants) {
    runs.push_back(run_closed_loop(frames, ground_truth, config, v));
  }
  return runs;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_report_csv(std::ostream& out, std::span<const RunSummary> runs,
                      std::uint64_t seed) {
  out << "# seed=" << seed << '\n';
  out << "frame,variant,k,tau,W,raw_density,enc_density,nbd,alpha_raw,"
         "alpha_enc,mse,psnr_db,mask_coverage\n";
  for (const RunSummary& run : runs) {
    for (const FrameRecord& r : run.rows) {
      const ActivityReport& a = r.report;
      out << a.frame_index << ',' << variant_name(r.variant) << ',' << r.k
          << ',' << r.tau << ',' << a.word_width << ','
          << format_number(a.raw_bit1_density) << ','
          << format_number(a.enc_bit1_density) << ','
          << (a.nbd ? format_number(*a.nbd) : "undef") << ','
          << format_number(a.alpha_raw) << ',' << format_number(a.alpha_enc)
          << ',' << format_number(a.mse) << ',' << format_number(a.psnr_db)
          << ',' << format_number(r.mask_coverage) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, std::span<const RunSummary> runs) {
  out << "k,mean_nbd,mean_psnr_db,mean_mask_coverage\n";
  for (const RunSummary& run : runs) {
    out << run.k << ','
        << (run.means.mean_nbd ? format_number(*run.means.mean_nbd)
                               : "undef")
        << ',' << format_number(run.means.mean_psnr_db) << ','
        << format_number(run.means.mean_mask_coverage) << '\n';
  }
}

}  // namespace motimem
