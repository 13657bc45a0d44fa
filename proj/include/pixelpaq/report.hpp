#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pixelpaq/codec_sim.hpp"
#include "pixelpaq/metrics.hpp"

namespace pixelpaq {

// Everything a command run needs. Built from CLI flags and/or a JSON sidecar.
struct RunConfig {
    std::filesystem::path input;
    VideoSpec spec;
    int cb_size = 64;
    int base_qp = 22;
    std::vector<QpMode> modes = {QpMode::PixelPaq};
    bool exact_weights = false;
    bool scale_chroma_knees = true;
    double deadzone_theta = kDefaultDeadzoneTheta;
    std::optional<std::pair<std::int64_t, std::int64_t>> frames;  // inclusive, 0-based
    std::filesystem::path out_dir = ".";
    bool emit_recon = false;
    bool emit_ssim_maps = false;

    JndParams jnd() const;
    void validate() const;
    // The frame range to process, resolved against spec.frame_count.
    std::pair<std::int64_t, std::int64_t> frame_range() const;
};

// Reads VideoSpec fields ({width, height, bit_depth, chroma_format,
// frame_count}) from a JSON sidecar file.
VideoSpec spec_from_json_file(const std::filesystem::path& path);

// Serialises a double exactly as it would appear in the JSON reports, so CSV
// and JSON carry identical values. Infinity becomes "inf".
std::string json_num(double v);

// analyze: per-CB QP map -> <out>/qpmap.json and <out>/qpmap.csv.
void run_analyze(const RunConfig& config);

// simulate: codec simulation + metrics -> <out>/report.json and
// <out>/jnd_blocks.csv, plus optional <out>/recon.yuv and SSIM map PGMs.
void run_simulate(const RunConfig& config);

// compare: analyze+simulate per mode on identical frames -> <out>/compare.json
// with per-mode totals, per-channel deltas and the chroma bit reduction of the
// first mode against each other mode. Requires >= 2 modes.
void run_compare(const RunConfig& config);

// curves: luma/chroma weight tables -> <out>/curve_{luma,chroma}_b<depth>.csv.
void run_curves(const std::vector<int>& bit_depths, int n_points,
                const std::filesystem::path& out_dir, const JndParams& params = {});

// info: byte-size accounting for a spec, optionally validated against the
// input file's actual size. Returns the JSON text it would print.
std::string info_json(const RunConfig& config, bool check_file);

} // namespace pixelpaq
