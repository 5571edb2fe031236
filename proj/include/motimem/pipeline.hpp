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

// Closed-loop harness. Frame t is encoded with a mask predicted from the
// detections of frame t-1; the detector (a seeded ground-truth stub) then
// runs on frame t and its output steers frame t+1.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motimem/bitcodec.hpp"
#include "motimem/frame.hpp"
#include "motimem/mask.hpp"
#include "motimem/metrics.hpp"
#include "motimem/roi.hpp"

namespace motimem {

enum class Variant {
  kMotiMem,   // RoI-routed hybrid coding
  kGlobalK,   // background path everywhere
  kUniformK,  // truncation only: no inversion, no flag
  kRaw,       // passthrough
};

inline constexpr std::array<Variant, 4> kAllVariants = {
    Variant::kMotiMem, Variant::kGlobalK, Variant::kUniformK, Variant::kRaw};

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct DetectorStubConfig {
  /// Scale of the integer coordinate jitter, in pixels.
  double sigma_px = 1.0;
  double dropout = 0.0;
};

struct PipelineConfig {
  CodingParams params{8, 4};
  /// roi.block_size is overridden by params.block_size().
  RoiConfig roi;
  DetectorStubConfig detector;
  std::uint64_t seed = 1;
  int word_width = 8;
  int jobs = 1;
  int sweep_k_min = 1;
  int sweep_k_max = 7;
};

/// Drops each box with probability `dropout`, jitters survivors by
/// round(N(0, sigma)) per coordinate and clamps them to the frame. Boxes
/// that collapse to zero area after clamping are dropped.
FrameDetections oracle_detector(const FrameDetections& ground_truth,
                                FrameDims frame,
                                const DetectorStubConfig& config,
                                std::mt19937_64& rng);

struct FrameRecord {
  Variant variant = Variant::kMotiMem;
  int k = 0;
  int tau = 0;
  ActivityReport report;
  double mask_coverage = 0.0;
};

struct Aggregates {
  /// Mean over frames with a defined NBD; nullopt if there are none.
  std::optional<double> mean_nbd;
  double mean_raw_density = 0.0;
  double mean_enc_density = 0.0;
  double mean_alpha_raw = 0.0;
  double mean_alpha_enc = 0.0;
  double mean_mse = 0.0;
  /// Arithmetic mean of per-frame PSNR; infinite if any frame is lossless.
  double mean_psnr_db = 0.0;
  double mean_mask_coverage = 0.0;
};

Aggregates aggregate(std::span<const FrameRecord> rows);

struct RunSummary {
  Variant variant = Variant::kMotiMem;
  int k = 0;
  int tau = 0;
  std::vector<FrameRecord> rows;
  /// Mask applied at each frame (all-zero for the non-RoI variants).
  std::vector<RoiMask> masks;
  Aggregates means;
};

/// Runs one variant over the sequence, strictly in frame order.
/// `ground_truth` entry i must have frame_index i; it may be shorter than
/// `frames` (missing frames have no objects). Throws AlignmentError when the
/// sequences disagree.
RunSummary run_closed_loop(std::span<const Frame> frames,
                           std::span<const FrameDetections> ground_truth,
                           const PipelineConfig& config,
                           Variant variant = Variant::kMotiMem);

/// One independent run per k in [sweep_k_min, sweep_k_max] with tau =
/// floor(k/2) and the same seed.
std::vector<RunSummary> run_sweep(std::span<const Frame> frames,
                                  std::span<const FrameDetections> ground_truth,
                                  const PipelineConfig& config,
                                  Variant variant = Variant::kMotiMem);

/// MotiMem, Global-k, Uniform-k and Raw on identical inputs, in that order.
std::vector<RunSummary> compare_variants(
    std::span<const Frame> frames,
    std::span<const FrameDetections> ground_truth,
    const PipelineConfig& config);

/// Per-frame report: a "# seed=..." line, then the header row
/// frame,variant,k,tau,W,raw_density,enc_density,nbd,alpha_raw,alpha_enc,
/// mse,psnr_db,mask_coverage and one row per frame of every run.
void write_report_csv(std::ostream& out, std::span<const RunSummary> runs,
                      std::uint64_t seed);

/// k,mean_nbd,mean_psnr_db,mean_mask_coverage; one row per run.
void write_sweep_csv(std::ostream& out, std::span<const RunSummary> runs);

/// Fixed-precision decimal used by every CSV writer; "inf" for +infinity.
std::string format_number(double v);

}  // namespace motimem
