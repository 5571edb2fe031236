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

#include "motimem/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "motimem/bitcodec.hpp"
#include "motimem/corpus.hpp"
#include "motimem/errors.hpp"
#include "motimem/metrics.hpp"
#include "motimem/pipeline.hpp"
#include "motimem/roi.hpp"
#include "motimem/stream.hpp"

namespace motimem::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel log_level_from_env() {
  const char* v = std::getenv("MOTIMEM_LOG");
  if (v == nullptr) return LogLevel::kInfo;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::kQuiet;
  if (s == "debug" || s == "2") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  LogLevel level;

  void warn(const std::string& msg) const {
    if (level != LogLevel::kQuiet) err << "warning: " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level == LogLevel::kDebug) err << "debug: " << msg << '\n';
  }
};

// Flags shared by every subcommand that codes frames.
struct CodingFlags {
  int k = 4;
  std::optional<int> tau;
  int block = 16;

  void add_to(CLI::App& app) {
    app.add_option("--k", k, "Retained MSB count k, 1 <= k <= B-1");
    app.add_option("--tau", tau, "Inversion threshold, 0 <= tau <= k")
        ->default_str("floor(k/2)");
    app.add_option("--block", block, "RoI mask block size in pixels")
        ->check(CLI::PositiveNumber);
  }

  CodingParams params(int bit_width) const {
    try {
      return CodingParams(bit_width, k, tau, block);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
};

struct RoiFlags {
  double inflate_abs = 8.0;
  double inflate_rel = 0.1;
  double iou = 0.3;
  double conf_floor = 0.0;
  std::string fallback = "ones";

  void add_to(CLI::App& app) {
    app.add_option("--inflate-abs", inflate_abs,
                   "Minimum inflation margin per side, pixels")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--inflate-rel", inflate_rel,
                   "Inflation margin as a fraction of box side")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--iou", iou, "IoU threshold for track matching")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--conf-floor", conf_floor,
                   "Ignore boxes below this confidence")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--fallback", fallback,
                   "Cold-start mask: ones (whole frame RoI) or zeros")
        ->check(CLI::IsMember({"ones", "zeros"}));
  }

  RoiConfig config(int block) const {
    RoiConfig c;
    c.block_size = block;
    c.inflation = InflationPolicy{inflate_abs, inflate_rel};
    c.iou_threshold = iou;
    c.confidence_floor = conf_floor;
    c.fallback = fallback == "zeros" ? ColdStartFallback::kAllZeros
                                     : ColdStartFallback::kAllOnes;
    return c;
  }
};

struct PipelineFlags {
  std::string corpus = "corpus";
  std::uint64_t seed = 1;
  double sigma = 1.0;
  double dropout = 0.0;
  int word_width = 8;
  int jobs = 1;
  bool csv = false;
  CodingFlags coding;
  RoiFlags roi;

  void add_to(CLI::App& app) {
    app.add_option("--corpus", corpus,
                   "Directory with frame_*.pgm/ppm and detections.jsonl");
    app.add_option("--seed", seed, "Seed for the detector stub");
    app.add_option("--sigma", sigma, "Detector stub jitter scale, pixels")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--dropout", dropout,
                   "Detector stub per-box drop probability")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--word-width", word_width,
                   "Bus word width W for transition activity")
        ->check(CLI::IsMember({8, 16, 32, 64}));
    app.add_option("--jobs", jobs, "Worker threads for intra-frame coding")
        ->check(CLI::PositiveNumber);
    app.add_flag("--csv", csv, "Print CSV to standard output");
    coding.add_to(app);
    roi.add_to(app);
  }

  PipelineConfig config(int bit_width) const {
    PipelineConfig c;
    c.params = coding.params(bit_width);
    c.roi = roi.config(coding.block);
    c.detector = DetectorStubConfig{sigma, dropout};
    c.seed = seed;
    c.word_width = word_width;
    c.jobs = jobs;
    return c;
  }
};

Corpus load_corpus(const Context& ctx, const std::string& dir) {
  Corpus corpus = read_corpus(dir);
  if (corpus.frames.empty()) {
    throw Error(ErrorKind::kIo, "no frame_* images in " + dir);
  }
  if (corpus.detections.empty()) {
    ctx.warn("no detections.jsonl in " + dir +
             "; every frame will use the cold-start mask");
  }
  ctx.debug("loaded " + std::to_string(corpus.frames.size()) + " frames");
  return corpus;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::kIo, "cannot create " + path);
  f << text;
}

std::string summary_line(const RunSummary& run) {
  std::ostringstream s;
  s << variant_name(run.variant) << ": k=" << run.k << " tau=" << run.tau
    << " frames=" << run.rows.size() << " mean_nbd="
    << (run.means.mean_nbd ? format_number(*run.means.mean_nbd) : "undef")
    << " mean_enc_density=" << format_number(run.means.mean_enc_density)
    << " mean_alpha_enc=" << format_number(run.means.mean_alpha_enc)
    << " mean_psnr_db=" << format_number(run.means.mean_psnr_db)
    << " mean_mask_coverage=" << format_number(run.means.mean_mask_coverage);
  return s.str();
}

// ---------------------------------------------------------------------------

struct EncodeCmd {
  std::string frame_path;
  std::string detections_path;
  int prev_frame = -1;
  std::string out_path = "encoded.mtmm";
  int jobs = 1;
  CodingFlags coding;
  RoiFlags roi;

  void add_to(CLI::App& app) {
    app.add_option("frame", frame_path, "Input PGM/PPM frame")->required();
    app.add_option("--detections", detections_path,
                   "Detection records of earlier frames (JSON lines)");
    app.add_option("--prev-frame", prev_frame,
                   "Detections of this frame index steer the mask; -1 = last")
        ->check(CLI::Range(-1, 0x7FFFFFFF));
    app.add_option("--out", out_path, "Output container path");
    app.add_option("--jobs", jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    coding.add_to(app);
    roi.add_to(app);
  }

  int run(const Context& ctx) const {
    const Frame frame = read_frame(frame_path);
    const CodingParams params = coding.params(frame.bit_width());
    const RoiConfig roi_cfg = roi.config(params.block_size());
    const FrameDims dims{frame.width(), frame.height()};

    RoiMask mask;
    std::vector<FrameDetections> history;
    if (!detections_path.empty()) history = read_detections(detections_path);
    const int chosen = prev_frame >= 0 ? prev_frame
                                       : static_cast<int>(history.size()) - 1;
    if (chosen >= static_cast<int>(history.size()) || chosen < 0 ||
        history[chosen].boxes.empty()) {
      ctx.warn(detections_path.empty()
                   ? "no detections given; using the cold-start fallback mask"
                   : "no detections for the previous frame; using the "
                     "cold-start fallback mask");
      mask = RoiMask::for_frame(
          dims.width, dims.height, params.block_size(),
          roi_cfg.fallback == ColdStartFallback::kAllOnes);
    } else {
      std::vector<MotionState> motion;
      if (chosen > 0) {
        motion = update_motion(history[chosen - 1], history[chosen],
                               roi_cfg.iou_threshold);
      }
      mask = predict_mask(history[chosen], motion, chosen + 1, dims, roi_cfg);
    }

    const EncodedFrame enc = encode_frame(frame, mask, params, jobs);
    write_encoded(out_path, enc);
    const auto ratio =
        nbd(BitStream::from_frame(frame), BitStream::from_frame(enc.words));
    ctx.out << "nbd=" << (ratio ? format_number(*ratio) : "undef")
            << " mask_coverage="
            << format_number(mask.pixel_coverage(dims.width, dims.height))
            << " k=" << params.retained_k() << " tau=" << params.tau()
            << " out=" << out_path << '\n';
    return kExitOk;
  }
};

struct DecodeCmd {
  std::string container_path;
  std::string out_path = "decoded.pnm";
  int jobs = 1;

  void add_to(CLI::App& app) {
    app.add_option("container", container_path, "Input MTMM container")
        ->required();
    app.add_option("--out", out_path, "Output PGM/PPM path");
    app.add_option("--jobs", jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
  }

  int run(const Context& ctx) const {
    const EncodedFrame enc = read_encoded(container_path);
    write_frame(out_path, decode_frame(enc, jobs));
    ctx.out << "decoded " << enc.words.width() << "x" << enc.words.height()
            << "x" << enc.words.channels() << " -> " << out_path << '\n';
    return kExitOk;
  }
};

struct MetricsCmd {
  std::string raw_path;
  std::string other_path;
  int word_width = 8;
  bool header = false;

  void add_to(CLI::App& app) {
    app.add_option("raw", raw_path, "Raw PGM/PPM frame")->required();
    app.add_option("encoded", other_path,
                   "MTMM container, or an encoded/decoded PGM/PPM frame")
        ->required();
    app.add_option("--word-width", word_width,
                   "Bus word width W for transition activity")
        ->check(CLI::Range(1, 64));
    app.add_flag("--header", header, "Print the CSV header row first");
  }

  int run(const Context& ctx) const {
    const Frame raw = read_frame(raw_path);
    const auto bytes = read_file(other_path);
    Frame encoded;
    Frame decoded;
    if (bytes.size() >= 4 && bytes[0] == 'M' && bytes[1] == 'T' &&
        bytes[2] == 'M' && bytes[3] == 'M') {
      std::optional<EncodedFrame> parsed;
      try {
        parsed = parse_encoded(bytes);
      } catch (const Error& e) {
        throw e.with_context(other_path);
      }
      EncodedFrame& enc = *parsed;
      decoded = decode_frame(enc);
      encoded = std::move(enc.words);
    } else {
      try {
        encoded = parse_pnm(bytes);
      } catch (const Error& e) {
        throw e.with_context(other_path);
      }
      decoded = encoded;
    }
    if (!raw.same_shape(encoded)) {
      throw Error(ErrorKind::kDimensionMismatch,
                  raw_path + " and " + other_path + " differ in shape");
    }
    const ActivityReport r =
        measure_activity(0, raw, encoded, decoded, word_width);
    if (header) {
      ctx.out << "frame,W,raw_density,enc_density,nbd,alpha_raw,alpha_enc,"
                 "mse,psnr_db\n";
    }
    ctx.out << r.frame_index << ',' << r.word_width << ','
            << format_number(r.raw_bit1_density) << ','
            << format_number(r.enc_bit1_density) << ','
            << (r.nbd ? format_number(*r.nbd) : "undef") << ','
            << format_number(r.alpha_raw) << ',' << format_number(r.alpha_enc)
            << ',' << format_number(r.mse) << ',' << format_number(r.psnr_db)
            << '\n';
    return kExitOk;
  }
};

struct RunCmd {
  PipelineFlags pipe;
  std::string variant = "motimem";
  std::string out_path = "report.csv";

  void add_to(CLI::App& app) {
    pipe.add_to(app);
    app.add_option("--variant", variant, "Coding variant")
        ->check(CLI::IsMember({"motimem", "global_k", "uniform_k", "raw"}));
    app.add_option("--out", out_path, "Per-frame report CSV");
  }

  int run(const Context& ctx) const {
    const Corpus corpus = load_corpus(ctx, pipe.corpus);
    const PipelineConfig cfg = pipe.config(corpus.frames.front().bit_width());
    const RunSummary summary = run_closed_loop(
        corpus.frames, corpus.detections, cfg, *parse_variant(variant));
    std::ostringstream csv;
    write_report_csv(csv, std::span(&summary, 1), cfg.seed);
    write_text(out_path, csv.str());
    if (pipe.csv) {
      ctx.out << csv.str();
    } else {
      ctx.out << summary_line(summary) << '\n';
    }
    return kExitOk;
  }
};

std::pair<int, int> parse_k_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      const int k = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {k, k};
    }
    const std::string lo_s = text.substr(0, colon);
    const std::string hi_s = text.substr(colon + 1);
    const int lo = std::stoi(lo_s, &used);
    if (used != lo_s.size()) throw std::invalid_argument(text);
    const int hi = std::stoi(hi_s, &used);
    if (used != hi_s.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--k must be K or KMIN:KMAX, got '" + text + "'");
  }
}

struct SweepCmd {
  PipelineFlags pipe;
  std::string k_range = "1:7";
  std::string variant = "motimem";
  std::string out_path = "sweep.csv";
  std::string report_path;

  void add_to(CLI::App& app) {
    pipe.add_to(app);
    // The sweep owns --k; drop the single-k option added by PipelineFlags.
    app.remove_option(app.get_option("--k"));
    app.remove_option(app.get_option("--tau"));
    app.add_option("--k", k_range, "Range of retained k, KMIN:KMAX");
    app.add_option("--variant", variant, "Coding variant")
        ->check(CLI::IsMember({"motimem", "global_k", "uniform_k", "raw"}));
    app.add_option("--out", out_path, "Sweep summary CSV");
    app.add_option("--report", report_path,
                   "Optional per-frame report CSV for every k")
        ->default_str("none");
  }

  int run(const Context& ctx) const {
    const auto [lo, hi] = parse_k_range(k_range);
    const Corpus corpus = load_corpus(ctx, pipe.corpus);
    const int bits = corpus.frames.front().bit_width();
    if (lo < 1 || hi > bits - 1 || lo > hi) {
      throw UsageError("--k range must lie within [1, B-1] = [1, " +
                       std::to_string(bits - 1) + "]");
    }
    PipelineFlags flags = pipe;
    flags.coding.k = lo;
    flags.coding.tau.reset();
    PipelineConfig cfg = flags.config(bits);
    cfg.sweep_k_min = lo;
    cfg.sweep_k_max = hi;
    const auto runs = run_sweep(corpus.frames, corpus.detections, cfg,
                                *parse_variant(variant));
    std::ostringstream csv;
    write_sweep_csv(csv, runs);
    write_text(out_path, csv.str());
    if (!report_path.empty()) {
      std::ostringstream report;
      write_report_csv(report, runs, cfg.seed);
      write_text(report_path, report.str());
    }
    if (pipe.csv) {
      ctx.out << csv.str();
    } else {
      for (const auto& r : runs) ctx.out << summary_line(r) << '\n';
    }
    return kExitOk;
  }
};

struct CompareCmd {
  PipelineFlags pipe;
  std::string out_path = "compare.csv";

  void add_to(CLI::App& app) {
    pipe.add_to(app);
    app.add_option("--out", out_path, "Per-frame report CSV, all variants");
  }

  int run(const Context& ctx) const {
    const Corpus corpus = load_corpus(ctx, pipe.corpus);
    const PipelineConfig cfg = pipe.config(corpus.frames.front().bit_width());
    const auto runs = compare_variants(corpus.frames, corpus.detections, cfg);
    std::ostringstream csv;
    write_report_csv(csv, runs, cfg.seed);
    write_text(out_path, csv.str());
    if (pipe.csv) {
      ctx.out << csv.str();
    } else {
      for (const auto& r : runs) ctx.out << summary_line(r) << '\n';
    }
    return kExitOk;
  }
};

struct GenCorpusCmd {
  CorpusConfig config;
  std::string out_dir = "corpus";

  void add_to(CLI::App& app) {
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--frames", config.frames, "Number of frames")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--width", config.width, "Frame width")
        ->check(CLI::PositiveNumber);
    app.add_option("--height", config.height, "Frame height")
        ->check(CLI::PositiveNumber);
    app.add_option("--channels", config.channels, "1 (PGM) or 3 (PPM)")
        ->check(CLI::IsMember({1, 3}));
    app.add_option("--objects", config.objects, "Moving objects per frame")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--min-object", config.min_object,
                   "Smallest object side, pixels")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-object", config.max_object,
                   "Largest object side, pixels")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-speed", config.max_speed,
                   "Largest object speed, pixels/frame")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", config.seed, "Generator seed");
  }

  int run(const Context& ctx) const {
    Corpus corpus;
    try {
      corpus = generate_corpus(config);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    write_corpus(out_dir, corpus);
    ctx.out << "wrote " << corpus.frames.size() << " frames to " << out_dir
            << '\n';
    return kExitOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  const Context ctx{out, err, log_level_from_env()};

  CLI::App app{"RoI-guided hybrid bit coding for low-activity frame buffers",
               "motimem"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  EncodeCmd encode;
  DecodeCmd decode;
  MetricsCmd metrics;
  RunCmd run_cmd;
  SweepCmd sweep;
  CompareCmd compare;
  GenCorpusCmd gen;

  auto* encode_app =
      app.add_subcommand("encode", "Encode one frame into an MTMM container");
  encode.add_to(*encode_app);
  auto* decode_app =
      app.add_subcommand("decode", "Decode an MTMM container to PGM/PPM");
  decode.add_to(*decode_app);
  auto* metrics_app = app.add_subcommand(
      "metrics", "Bit-1 density, NBD, transition activity and PSNR");
  metrics.add_to(*metrics_app);
  auto* run_app =
      app.add_subcommand("run", "Closed-loop run over a corpus directory");
  run_cmd.add_to(*run_app);
  auto* sweep_app =
      app.add_subcommand("sweep", "Closed-loop runs over a range of k");
  sweep.add_to(*sweep_app);
  auto* compare_app = app.add_subcommand(
      "compare", "MotiMem vs Global-k vs Uniform-k vs Raw on one corpus");
  compare.add_to(*compare_app);
  auto* gen_app = app.add_subcommand(
      "gen-corpus", "Write a synthetic moving-object corpus");
  gen.add_to(*gen_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode_app) return encode.run(ctx);
    if (*decode_app) return decode.run(ctx);
    if (*metrics_app) return metrics.run(ctx);
    if (*run_app) return run_cmd.run(ctx);
    if (*sweep_app) return sweep.run(ctx);
    if (*compare_app) return compare.run(ctx);
    if (*gen_app) return gen.run(ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidParams) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace motimem::cli
