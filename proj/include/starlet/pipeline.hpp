/*
Copyright 2026 The Starlet Segmentation Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Batch front end: decompose -> segment -> (optional) score against ground
// truth -> write D/R/COMP images and the per-level MCC table.

#ifndef STARLET_PIPELINE_HPP
#define STARLET_PIPELINE_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "starlet/evaluation.hpp"
#include "starlet/io.hpp"
#include "starlet/mlss.hpp"
#include "starlet/synth.hpp"
#include "starlet/transform.hpp"

namespace starlet::cli {

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kUsage = 1;
inline constexpr int kIo = 2;
inline constexpr int kValidation = 3;
}  // namespace exit_code

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultFirstLevel = 1;
inline constexpr int kDefaultLastLevel = 5;
inline constexpr const char* kCsvHeader = "level,tp,tn,fp,fn,mcc_percent,optimal";

struct RunConfig {
    std::string input_path;
    std::optional<std::string> gt_path;
    int first_level = kDefaultFirstLevel;
    int last_level = kDefaultLastLevel;
    MlssMode mode = MlssMode::Original;
    double threshold = 0.0;
    std::optional<std::string> output_dir;  // defaults to the input's directory
    bool emit_details = true;
    bool emit_masks = true;
    bool require_comp = false;

    bool mlsos() const noexcept { return gt_path.has_value(); }
    bool emit_comp() const noexcept { return gt_path.has_value(); }
    bool emit_csv() const noexcept { return gt_path.has_value(); }

    std::filesystem::path resolved_output_dir() const {
        if (output_dir) return *output_dir;
        const auto parent = std::filesystem::path(input_path).parent_path();
        return parent.empty() ? std::filesystem::path(".") : parent;
    }
};

namespace detail {

inline void add_run_options(CLI::App& app, RunConfig& cfg, std::string& first_raw, std::string& last_raw,
                            bool& variant, bool& no_details, bool& no_masks) {
    app.add_option("--input", cfg.input_path, "Photomicrograph to segment (PNG, JPEG or PGM)");
    app.add_option("--gt", cfg.gt_path, "Ground-truth image; enables MLSOS, COMP images and the MCC table");
    app.add_option("--first", first_raw, "Initial detail level L0 (default 1)");
    app.add_option("--last", last_raw, "Last detail level L (default 5)");
    app.add_flag("--variant", variant, "Use the derivative MLSS (no subtraction of the input image)");
    app.add_option("--threshold", cfg.threshold, "Binarization threshold: ROI where R_i > threshold (default 0)");
    app.add_option("--out", cfg.output_dir, "Output directory (default: alongside the input)");
    app.add_flag("--no-details", no_details, "Do not write D (detail level) images");
    app.add_flag("--no-masks", no_masks, "Do not write R (segmentation mask) images");
    app.add_flag("--comp", cfg.require_comp, "Require COMP comparison images (needs --gt)");
}

inline int parse_level(const std::string& text, const char* flag) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw UsageError(std::string(flag) + " expects an integer level, got '" + text + "'");
    return value;
}

inline void finish_config(RunConfig& cfg, const std::string& first_raw, const std::string& last_raw,
                          bool variant, bool no_details, bool no_masks) {
    if (cfg.input_path.empty()) throw UsageError("missing required option --input");
    if (!first_raw.empty()) cfg.first_level = parse_level(first_raw, "--first");
    if (!last_raw.empty()) cfg.last_level = parse_level(last_raw, "--last");
    cfg.mode = variant ? MlssMode::Derivative : MlssMode::Original;
    cfg.emit_details = !no_details;
    cfg.emit_masks = !no_masks;
    if (cfg.first_level < 1)
        throw ValidationError("--first must be >= 1, got " + std::to_string(cfg.first_level));
    if (cfg.first_level > cfg.last_level)
        throw ValidationError("--first (" + std::to_string(cfg.first_level) + ") must not exceed --last (" +
                              std::to_string(cfg.last_level) + ")");
    if (cfg.require_comp && !cfg.gt_path) throw ValidationError("COMP images require a ground truth (--gt)");
}

}  // namespace detail

/// Parses segmentation flags (program name excluded). Throws UsageError for
/// malformed command lines and ValidationError for inconsistent values.
inline RunConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Multi-level starlet segmentation"};
    RunConfig cfg;
    std::string first_raw, last_raw;
    bool variant = false, no_details = false, no_masks = false;
    detail::add_run_options(app, cfg, first_raw, last_raw, variant, no_details, no_masks);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    detail::finish_config(cfg, first_raw, last_raw, variant, no_details, no_masks);
    return cfg;
}

inline std::string format_mcc(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

inline std::string mcc_csv(const MccReport& report) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& s : report.per_level) {
        out += std::to_string(s.level) + ',' + std::to_string(s.counts.tp) + ',' + std::to_string(s.counts.tn) + ',' +
               std::to_string(s.counts.fp) + ',' + std::to_string(s.counts.fn) + ',' + format_mcc(s.mcc_percent) +
               ',' + (s.level == report.optimal_level ? '1' : '0') + '\n';
    }
    return out;
}

inline std::filesystem::path csv_path(const std::filesystem::path& dir, const std::string& stem) {
    return dir / (stem + "_mcc.csv");
}

// Writes to a sibling temporary and renames, so a failure never leaves a
// truncated table behind.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(IoError::Kind::WriteFailed, tmp.string(), "cannot open for writing");
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError(IoError::Kind::WriteFailed, path.string(), "write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError(IoError::Kind::WriteFailed, path.string(), "rename failed: " + ec.message());
    }
}

struct RunResult {
    std::vector<std::filesystem::path> images;
    std::optional<std::filesystem::path> csv;
    std::optional<MccReport> report;
};

/// Executes one configured run. Throws IoError / ValidationError.
inline RunResult execute(const RunConfig& cfg, std::ostream& log) {
    const LoadedImage input = load_grayscale(cfg.input_path);
    std::optional<GroundTruth> gt;
    if (cfg.gt_path) {
        gt = load_ground_truth(*cfg.gt_path);
        require_same_shape(input.pixels, gt->mask, "ground truth");
    }

    const LevelRange range(cfg.first_level, cfg.last_level);
    const auto dir = cfg.resolved_output_dir();
    const std::string stem = file_stem(cfg.input_path);

    log << "Applying starlet decomposition (levels 1.." << range.last() << ")...\n";
    const StarletDecomposition decomp = starlet_decompose(input.pixels, range.last());
    log << "Applying MLSS (" << to_string(cfg.mode) << ", levels " << range.first() << ".." << range.last()
        << ")...\n";
    const SegmentationStack stack = mlss(input.pixels, decomp, range, cfg.mode, cfg.threshold);

    RunResult result;
    if (gt) result.report = mlsos(stack, gt->mask);

    for (int level = range.first(); level <= range.last(); ++level) {
        log << "Level " << level << ":";
        if (cfg.emit_details) {
            const auto p = output_path(dir, stem, OutputKind::D, level);
            save_plane(decomp.detail(level), p);
            result.images.push_back(p);
            log << " D";
        }
        if (cfg.emit_masks) {
            const auto p = output_path(dir, stem, OutputKind::R, level);
            save_plane(stack.mask_at(level), p);
            result.images.push_back(p);
            log << " R";
        }
        if (gt) {
            const auto p = output_path(dir, stem, OutputKind::COMP, level);
            save_plane(comp_image(stack.mask_at(level), gt->mask), p);
            result.images.push_back(p);
            const auto& score = result.report->per_level[static_cast<std::size_t>(level - range.first())];
            log << " COMP  MCC = " << format_mcc(score.mcc_percent) << " %";
        }
        log << '\n';
    }

    if (result.report) {
        const auto p = csv_path(dir, stem);
        write_text_atomic(p, mcc_csv(*result.report));
        result.csv = p;
        log << "Optimal segmentation level: " << result.report->optimal_level << " (MCC = "
            << format_mcc(result.report->optimal().mcc_percent) << " %)\n";
    }
    return result;
}

/// Runs and maps failures onto exit codes: 2 for I/O, 3 for validation.
inline int run(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        execute(cfg, log);
        return exit_code::kSuccess;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kValidation;
    }
}

// ---- synth subcommand ----

struct SynthConfig {
    synth::FixtureSpec spec;
    std::string out_dir = ".";
    std::string name;  // defaults to "{kind}_s{seed}"

    std::string resolved_name() const {
        return name.empty() ? std::string(synth::to_string(spec.kind)) + "_s" + std::to_string(spec.seed) : name;
    }
};

inline SynthConfig parse_synth_args(const std::vector<std::string>& args) {
    CLI::App app{"Generate a synthetic image and its ground truth"};
    SynthConfig cfg;
    std::string kind = "blobs";
    bool size_set = false;
    app.add_option("--kind", kind, "blobs or tracks")->check(CLI::IsMember({"blobs", "tracks"}));
    app.add_option("--seed", cfg.spec.seed, "Generator seed");
    app.add_option("--out", cfg.out_dir, "Output directory");
    app.add_option("--name", cfg.name, "File stem (default {kind}_s{seed})");
    app.add_option("--width", cfg.spec.width, "Canvas width in pixels");
    app.add_option("--height", cfg.spec.height, "Canvas height in pixels");
    app.add_option("--count", cfg.spec.count, "Number of disks or tracks");
    app.add_option_function<double>(
        "--size", [&](double v) { cfg.spec.size = v; size_set = true; },
        "Disk radius (blobs) or line thickness (tracks), pixels");
    app.add_option("--fg", cfg.spec.foreground, "Foreground intensity in [0,1]");
    app.add_option("--bg", cfg.spec.background, "Background intensity in [0,1]");
    app.add_option("--noise", cfg.spec.noise_sigma, "Gaussian noise standard deviation");
    app.add_flag("--blur", cfg.spec.blur, "Apply a 3x3 box blur to the image");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    cfg.spec.kind = kind == "tracks" ? synth::FixtureKind::Tracks : synth::FixtureKind::Blobs;
    if (!size_set) cfg.spec.size = cfg.spec.kind == synth::FixtureKind::Tracks ? 2.0 : 8.0;
    if (cfg.spec.kind == synth::FixtureKind::Tracks && !app.count("--count")) cfg.spec.count = 8;
    return cfg;
}

/// Writes {name}.png (8-bit image) and {name}GT.png (0/255 mask).
inline int run_synth(const SynthConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        const synth::Fixture fx = synth::generate(cfg.spec);
        const std::filesystem::path dir = cfg.out_dir;
        const std::string name = cfg.resolved_name();
        save_intensity(fx.image, dir / (name + ".png"));
        save_plane(fx.ground_truth, dir / (name + "GT.png"));
        log << "Wrote " << (dir / (name + ".png")).string() << " and " << (dir / (name + "GT.png")).string() << '\n';
        return exit_code::kSuccess;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kValidation;
    }
}

inline constexpr const char* kUsage =
    "usage: starlet --input PATH [--gt PATH] [--first N] [--last N] [--variant]\n"
    "               [--threshold X] [--out DIR] [--no-details] [--no-masks] [--comp]\n"
    "       starlet synth [--kind blobs|tracks] [--seed N] [--out DIR] [--name STEM]\n"
    "               [--width W] [--height H] [--count N] [--size S] [--fg F] [--bg B]\n"
    "               [--noise SIGMA] [--blur]\n";

/// Full command-line entry point; `args` excludes the program name.
inline int main_entry(const std::vector<std::string>& args, std::ostream& log = std::cout,
                      std::ostream& err = std::cerr) {
    if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
        log << kUsage;
        return exit_code::kSuccess;
    }
    const bool is_synth = !args.empty() && args[0] == "synth";
    try {
        if (is_synth) return run_synth(parse_synth_args({args.begin() + 1, args.end()}), log, err);
        return run(parse_args(args), log, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n' << kUsage;
        return exit_code::kUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kValidation;
    }
}

}  // namespace starlet::cli

#endif  // STARLET_PIPELINE_HPP
