#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pixelpaq/report.hpp"

namespace {

using pixelpaq::RunConfig;

struct CliOpts {
    std::string input;
    std::string sidecar;
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    std::string chroma = "420";
    std::int64_t frame_count = 0;  // 0 = derive from file size
    std::string frames;
    int cb_size = 64;
    int qp = 22;
    std::vector<std::string> modes;
    bool exact_weights = false;
    bool no_knee_scaling = false;
    double theta = pixelpaq::kDefaultDeadzoneTheta;
    std::string out = ".";
    bool emit_recon = false;
    bool emit_ssim_maps = false;
};

void add_spec_options(CLI::App* cmd, CliOpts& o, bool input_required) {
    auto* in = cmd->add_option("--input,-i", o.input, "raw planar YCbCr input file");
    if (input_required) in->required();
    cmd->add_option("--spec", o.sidecar, "JSON sidecar with VideoSpec fields (default: <input>.json if present)");
    cmd->add_option("--width", o.width, "frame width in pixels");
    cmd->add_option("--height", o.height, "frame height in pixels");
    cmd->add_option("--bit-depth", o.bit_depth, "sample bit depth")->check(CLI::IsMember({8, 10, 12, 16}));
    cmd->add_option("--chroma", o.chroma, "chroma format")->check(CLI::IsMember({"420", "422", "444"}));
    cmd->add_option("--frame-count", o.frame_count, "frames in the file (default: derived from file size)");
}

void add_run_options(CLI::App* cmd, CliOpts& o, bool multi_mode) {
    cmd->add_option("--frames", o.frames, "inclusive frame range A..B (default: all)");
    cmd->add_option("--cb-size", o.cb_size, "luma coding block size")->check(CLI::IsMember({16, 32, 64}));
    cmd->add_option("--qp", o.qp, "base (slice) QP")->check(CLI::Range(0, 51));
    auto* mode = cmd->add_option("--mode", o.modes, "quantisation mode: pixel-paq, idsq or uniform");
    if (multi_mode) mode->expected(-1);
    cmd->add_flag("--exact-weights", o.exact_weights, "use unrounded JND weights on QSteps");
    cmd->add_flag("--no-knee-scaling", o.no_knee_scaling, "keep the 8-bit chroma knees at any bit depth");
    cmd->add_option("--theta", o.theta, "dead-zone quantiser offset in [0, 1)");
    cmd->add_option("--out,-o", o.out, "output directory");
}

std::pair<std::int64_t, std::int64_t> parse_frame_range(const std::string& s) {
    long long a = 0;
    long long b = 0;
    if (std::sscanf(s.c_str(), "%lld..%lld", &a, &b) != 2)
        throw pixelpaq::ConfigError("frame range must look like A..B, got '" + s + "'");
    return {a, b};
}

RunConfig build_config(const CLI::App* cmd, const CliOpts& o, bool need_input) {
    RunConfig cfg;
    pixelpaq::VideoSpec spec;

    // Defaults, then sidecar, then explicit flags.
    std::string sidecar = o.sidecar;
    if (sidecar.empty() && !o.input.empty()) {
        const std::string candidate = o.input + ".json";
        if (std::filesystem::exists(candidate)) sidecar = candidate;
    }
    if (!sidecar.empty()) spec = pixelpaq::spec_from_json_file(sidecar);

    if (cmd->count("--width")) spec.width = o.width;
    if (cmd->count("--height")) spec.height = o.height;
    if (cmd->count("--bit-depth")) spec.bit_depth = o.bit_depth;
    if (cmd->count("--chroma")) spec.chroma_format = pixelpaq::chroma_format_from_name(o.chroma);
    if (cmd->count("--frame-count")) spec.frame_count = o.frame_count;

    cfg.input = o.input;
    if (need_input) {
        if (o.input.empty()) throw pixelpaq::ConfigError("--input is required");
        // Derive the frame count from the file size when it was not given.
        if (!cmd->count("--frame-count") && (sidecar.empty() || spec.frame_count <= 0)) {
            std::error_code ec;
            if (!std::filesystem::exists(cfg.input, ec))
                throw pixelpaq::IoError("input file not found: " + cfg.input.string());
            const auto size = static_cast<std::int64_t>(std::filesystem::file_size(cfg.input, ec));
            spec.frame_count = 1;  // placeholder for frame_byte_size
            const auto per_frame = pixelpaq::frame_byte_size(spec);
            if (per_frame <= 0 || size % per_frame != 0)
                throw pixelpaq::DataError("file size " + std::to_string(size) +
                                          " is not a whole number of " + std::to_string(per_frame) +
                                          "-byte frames; wrong spec?");
            spec.frame_count = size / per_frame;
        }
    }

    cfg.spec = spec;
    cfg.cb_size = o.cb_size;
    cfg.base_qp = o.qp;
    cfg.modes.clear();
    for (const std::string& m : o.modes) cfg.modes.push_back(pixelpaq::qp_mode_from_name(m));
    if (cfg.modes.empty()) cfg.modes.push_back(pixelpaq::QpMode::PixelPaq);
    cfg.exact_weights = o.exact_weights;
    cfg.scale_chroma_knees = !o.no_knee_scaling;
    cfg.deadzone_theta = o.theta;
    if (!o.frames.empty()) cfg.frames = parse_frame_range(o.frames);
    cfg.out_dir = o.out;
    cfg.emit_recon = o.emit_recon;
    cfg.emit_ssim_maps = o.emit_ssim_maps;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"JND-based luma/chroma perceptual quantisation analysis for raw YCbCr video"};
    app.require_subcommand(1);

    CliOpts analyze_opts, simulate_opts, compare_opts, info_opts;

    auto* analyze = app.add_subcommand("analyze", "derive the per-CB QP/offset map");
    add_spec_options(analyze, analyze_opts, true);
    add_run_options(analyze, analyze_opts, false);

    auto* simulate = app.add_subcommand("simulate", "transform-domain quantisation simulation with metrics");
    add_spec_options(simulate, simulate_opts, true);
    add_run_options(simulate, simulate_opts, false);
    simulate->add_flag("--emit-recon", simulate_opts.emit_recon, "write the reconstructed sequence as raw YUV");
    simulate->add_flag("--emit-ssim-maps", simulate_opts.emit_ssim_maps, "write per-frame SSIM index maps as PGM");

    auto* compare = app.add_subcommand("compare", "run two or more modes on the same frames and diff them");
    add_spec_options(compare, compare_opts, true);
    add_run_options(compare, compare_opts, true);

    struct CurveOpts {
        std::vector<int> bit_depths{8};
        int points = 256;
        std::string out = ".";
        bool no_knee_scaling = false;
    } curve_opts;
    auto* curves = app.add_subcommand("curves", "export the JND weight curves as CSV");
    curves->add_option("--bit-depth", curve_opts.bit_depths, "bit depths to tabulate")->expected(-1);
    curves->add_option("--points", curve_opts.points, "points per curve");
    curves->add_flag("--no-knee-scaling", curve_opts.no_knee_scaling, "keep the 8-bit chroma knees at any bit depth");
    curves->add_option("--out,-o", curve_opts.out, "output directory");

    auto* info = app.add_subcommand("info", "byte-size accounting for a spec, optionally checked against a file");
    add_spec_options(info, info_opts, false);

    try {
        app.parse(argc, argv);

        if (*analyze) {
            pixelpaq::run_analyze(build_config(analyze, analyze_opts, true));
        } else if (*simulate) {
            pixelpaq::run_simulate(build_config(simulate, simulate_opts, true));
        } else if (*compare) {
            pixelpaq::run_compare(build_config(compare, compare_opts, true));
        } else if (*curves) {
            pixelpaq::JndParams params;
            params.scale_chroma_knees = !curve_opts.no_knee_scaling;
            pixelpaq::run_curves(curve_opts.bit_depths, curve_opts.points, curve_opts.out, params);
        } else if (*info) {
            const bool check = !info_opts.input.empty();
            RunConfig cfg = build_config(info, info_opts, check);
            const std::string text = pixelpaq::info_json(cfg, check);
            std::cout << text;
            if (check && pixelpaq::sequence_byte_size(cfg.spec) !=
                             static_cast<std::int64_t>(std::filesystem::file_size(cfg.input)))
                return 4;
        }
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const pixelpaq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pixelpaq::exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
