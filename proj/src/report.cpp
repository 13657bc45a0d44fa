#include "pixelpaq/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace pixelpaq {

using ordered_json = nlohmann::ordered_json;

namespace {

// Infinity is serialised as the string "inf" (JSON has no infinity literal).
ordered_json num_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

ordered_json spec_json(const VideoSpec& spec) {
    return ordered_json{{"width", spec.width},
                        {"height", spec.height},
                        {"bit_depth", spec.bit_depth},
                        {"chroma_format", chroma_format_name(spec.chroma_format)},
                        {"frame_count", spec.frame_count}};
}

ordered_json params_json(const JndParams& p) {
    return ordered_json{{"a", p.a}, {"c", p.c}, {"d", p.d}, {"f", p.f},
                        {"g", p.g}, {"h", p.h}, {"j", p.j}, {"k", p.k},
                        {"scale_chroma_knees", p.scale_chroma_knees}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed on " + path.string());
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
}

struct ChannelTriple {
    double y = 0, cb = 0, cr = 0;
};

ordered_json triple_json(const ChannelTriple& t) {
    return ordered_json{{"y", num_or_inf(t.y)}, {"cb", num_or_inf(t.cb)}, {"cr", num_or_inf(t.cr)}};
}

// Accumulated outcome of simulating one mode over a frame range.
struct SequenceOutcome {
    ordered_json per_frame = ordered_json::array();
    double sq_err[3] = {0, 0, 0};
    std::int64_t samples[3] = {0, 0, 0};
    double ssim_sum[3] = {0, 0, 0};
    double bits[3] = {0, 0, 0};
    std::int64_t pass[3] = {0, 0, 0};
    std::int64_t blocks = 0;
    std::int64_t frames = 0;

    ChannelTriple pooled_psnr(int bit_depth) const {
        const double peak = static_cast<double>((1 << bit_depth) - 1);
        ChannelTriple t;
        double* out[3] = {&t.y, &t.cb, &t.cr};
        for (int c = 0; c < 3; ++c) {
            const double m = sq_err[c] / static_cast<double>(samples[c]);
            *out[c] = m == 0.0 ? std::numeric_limits<double>::infinity()
                               : 10.0 * std::log10(peak * peak / m);
        }
        return t;
    }
    ChannelTriple mean_ssim() const {
        return {ssim_sum[0] / frames, ssim_sum[1] / frames, ssim_sum[2] / frames};
    }
    ChannelTriple bits_triple() const { return {bits[0], bits[1], bits[2]}; }
    ChannelTriple pass_rate() const {
        const double n = static_cast<double>(blocks);
        return {pass[0] / n, pass[1] / n, pass[2] / n};
    }

    ordered_json aggregate_json(int bit_depth) const {
        ordered_json agg;
        agg["frames"] = frames;
        agg["psnr"] = triple_json(pooled_psnr(bit_depth));
        agg["ssim"] = triple_json(mean_ssim());
        ordered_json b = triple_json(bits_triple());
        b["chroma"] = bits[1] + bits[2];
        b["total"] = bits[0] + bits[1] + bits[2];
        agg["bits_proxy"] = b;
        ordered_json jnd = triple_json(pass_rate());
        jnd["all"] = static_cast<double>(pass[0] + pass[1] + pass[2]) / (3.0 * blocks);
        agg["jnd_pass_rate"] = jnd;
        return agg;
    }
};

// Extra outputs only cmd_simulate emits.
struct SimulateSinks {
    FrameWriter* recon = nullptr;
    bool ssim_maps = false;
    std::filesystem::path out_dir;
    std::string* jnd_csv = nullptr;
};

std::string frame_tag(std::int64_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05lld", static_cast<long long>(index));
    return buf;
}

SequenceOutcome run_sequence(const RunConfig& config, QpMode mode, SimulateSinks* sinks) {
    FrameReader reader(config.input, config.spec);
    const BlockGrid grid = partition(config.spec, config.cb_size);
    const JndParams params = config.jnd();
    const auto [first, last] = config.frame_range();

    SequenceOutcome out;
    for (std::int64_t idx = first; idx <= last; ++idx) {
        const Frame frame = reader.read_frame(idx);
        const QpMap map = build_qp_map(frame, grid, config.base_qp, mode, config.spec.bit_depth,
                                       params, config.exact_weights);
        const SimResult sim =
            simulate_frame(frame, grid, map, config.spec.bit_depth, config.deadzone_theta);
        const bool want_maps = sinks != nullptr && sinks->ssim_maps;
        const MetricsReport m = report(frame, sim.recon, config.spec.bit_depth, want_maps);

        ordered_json fj;
        fj["frame"] = idx;
        fj["psnr"] = triple_json({m.psnr_y, m.psnr_cb, m.psnr_cr});
        fj["ssim"] = triple_json({m.ssim_y, m.ssim_cb, m.ssim_cr});
        const double by = sim.bits(Channel::Y);
        const double bcb = sim.bits(Channel::Cb);
        const double bcr = sim.bits(Channel::Cr);
        ordered_json bj = triple_json({by, bcb, bcr});
        bj["chroma"] = bcb + bcr;
        bj["total"] = by + bcb + bcr;
        fj["bits_proxy"] = bj;
        const std::int64_t n = grid.block_count();
        fj["jnd"] = ordered_json{{"blocks", n},
                                 {"pass_y", sim.pass_count(Channel::Y)},
                                 {"pass_cb", sim.pass_count(Channel::Cb)},
                                 {"pass_cr", sim.pass_count(Channel::Cr)}};
        out.per_frame.push_back(fj);

        out.sq_err[0] += mse(frame.y, sim.recon.y) * frame.y.samples.size();
        out.sq_err[1] += mse(frame.cb, sim.recon.cb) * frame.cb.samples.size();
        out.sq_err[2] += mse(frame.cr, sim.recon.cr) * frame.cr.samples.size();
        out.samples[0] += static_cast<std::int64_t>(frame.y.samples.size());
        out.samples[1] += static_cast<std::int64_t>(frame.cb.samples.size());
        out.samples[2] += static_cast<std::int64_t>(frame.cr.samples.size());
        out.ssim_sum[0] += m.ssim_y;
        out.ssim_sum[1] += m.ssim_cb;
        out.ssim_sum[2] += m.ssim_cr;
        out.bits[0] += by;
        out.bits[1] += bcb;
        out.bits[2] += bcr;
        out.pass[0] += sim.pass_count(Channel::Y);
        out.pass[1] += sim.pass_count(Channel::Cb);
        out.pass[2] += sim.pass_count(Channel::Cr);
        out.blocks += n;
        ++out.frames;

        if (sinks != nullptr) {
            if (sinks->recon != nullptr) sinks->recon->write_frame(sim.recon);
            if (sinks->ssim_maps) {
                const char* names[3] = {"y", "cb", "cr"};
                for (int c = 0; c < 3; ++c)
                    write_pgm(sinks->out_dir /
                                  ("ssim_map_f" + frame_tag(idx) + "_" + names[c] + ".pgm"),
                              m.ssim_maps[static_cast<size_t>(c)]);
            }
            if (sinks->jnd_csv != nullptr) {
                std::string& csv = *sinks->jnd_csv;
                for (size_t b = 0; b < sim.per_cb.size(); ++b) {
                    const CbSimStats& s = sim.per_cb[b];
                    const QpMapEntry& e = map.entries[b];
                    csv += std::to_string(idx) + "," + std::to_string(s.luma_index) + "," +
                           json_num(s.q_max_y) + "," + json_num(s.q_max_cb) + "," +
                           json_num(s.q_max_cr) + "," + json_num(e.l_y) + "," +
                           json_num(e.w_cb) + "," + json_num(e.w_cr) + "," +
                           (s.pass_y ? "1" : "0") + "," + (s.pass_cb ? "1" : "0") + "," +
                           (s.pass_cr ? "1" : "0") + "\n";
                }
            }
        }
    }
    return out;
}

ordered_json header_json(const RunConfig& config) {
    ordered_json h;
    h["spec"] = spec_json(config.spec);
    h["cb_size"] = config.cb_size;
    h["base_qp"] = config.base_qp;
    h["exact_weights"] = config.exact_weights;
    h["deadzone_theta"] = config.deadzone_theta;
    h["params"] = params_json(config.jnd());
    const auto [first, last] = config.frame_range();
    h["frames"] = ordered_json{{"first", first}, {"last", last}};
    return h;
}

} // namespace

JndParams RunConfig::jnd() const {
    JndParams p;
    p.scale_chroma_knees = scale_chroma_knees;
    return p;
}

void RunConfig::validate() const {
    spec.validate();
    if (cb_size != 16 && cb_size != 32 && cb_size != 64)
        throw ConfigError("coding block size must be 16, 32 or 64");
    if (base_qp < kMinQp || base_qp > kMaxQp)
        throw ConfigError("base QP must lie in [0, 51]");
    if (modes.empty())
        throw ConfigError("at least one mode is required");
    if (!(deadzone_theta >= 0.0 && deadzone_theta < 1.0))
        throw ConfigError("dead-zone offset must lie in [0, 1)");
    jnd().validate(spec.bit_depth);
    frame_range();
}

std::pair<std::int64_t, std::int64_t> RunConfig::frame_range() const {
    if (!frames) return {0, spec.frame_count - 1};
    const auto [a, b] = *frames;
    if (a < 0 || b < a || b >= spec.frame_count)
        throw ConfigError("frame range " + std::to_string(a) + ".." + std::to_string(b) +
                          " outside [0, " + std::to_string(spec.frame_count - 1) + "]");
    return {a, b};
}

VideoSpec spec_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sidecar " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("invalid JSON sidecar " + path.string() + ": " + e.what());
    }
    VideoSpec spec;
    spec.frame_count = 0;  // 0 = not stated; callers derive it from the file size
    try {
        if (j.contains("width")) spec.width = j["width"].get<int>();
        if (j.contains("height")) spec.height = j["height"].get<int>();
        if (j.contains("bit_depth")) spec.bit_depth = j["bit_depth"].get<int>();
        if (j.contains("chroma_format")) {
            if (j["chroma_format"].is_number())
                spec.chroma_format = chroma_format_from_name(std::to_string(j["chroma_format"].get<int>()));
            else
                spec.chroma_format = chroma_format_from_name(j["chroma_format"].get<std::string>());
        }
        if (j.contains("frame_count")) spec.frame_count = j["frame_count"].get<std::int64_t>();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError("bad sidecar field in " + path.string() + ": " + e.what());
    }
    return spec;
}

std::string json_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return ordered_json(v).dump();
}

void run_analyze(const RunConfig& config) {
    config.validate();
    if (config.modes.size() != 1)
        throw ConfigError("analyze takes exactly one mode");

    FrameReader reader(config.input, config.spec);
    const BlockGrid grid = partition(config.spec, config.cb_size);
    const JndParams params = config.jnd();
    const QpMode mode = config.modes.front();
    const auto [first, last] = config.frame_range();

    ordered_json root = header_json(config);
    root["mode"] = qp_mode_name(mode);
    ordered_json frames = ordered_json::array();

    std::string csv =
        "frame,index,x,y,mu_y,mu_cb,mu_cr,l_y,w_cb,w_cr,pqp_y,oqp_cb,oqp_cr\n";

    for (std::int64_t idx = first; idx <= last; ++idx) {
        const Frame frame = reader.read_frame(idx);
        const QpMap map = build_qp_map(frame, grid, config.base_qp, mode, config.spec.bit_depth,
                                       params, config.exact_weights);
        ordered_json fj;
        fj["frame"] = idx;
        ordered_json blocks = ordered_json::array();
        for (const QpMapEntry& e : map.entries) {
            const CodingBlock& b = grid.luma_blocks[static_cast<size_t>(e.luma_index)];
            blocks.push_back(ordered_json{{"index", e.luma_index},
                                          {"x", b.x},
                                          {"y", b.y},
                                          {"mu_y", e.mu_y},
                                          {"mu_cb", e.mu_cb},
                                          {"mu_cr", e.mu_cr},
                                          {"l_y", e.l_y},
                                          {"w_cb", e.w_cb},
                                          {"w_cr", e.w_cr},
                                          {"pqp_y", e.pqp_y},
                                          {"oqp_cb", e.oqp_cb},
                                          {"oqp_cr", e.oqp_cr}});
            csv += std::to_string(idx) + "," + std::to_string(e.luma_index) + "," +
                   std::to_string(b.x) + "," + std::to_string(b.y) + "," + json_num(e.mu_y) + "," +
                   json_num(e.mu_cb) + "," + json_num(e.mu_cr) + "," + json_num(e.l_y) + "," +
                   json_num(e.w_cb) + "," + json_num(e.w_cr) + "," + std::to_string(e.pqp_y) +
                   "," + std::to_string(e.oqp_cb) + "," + std::to_string(e.oqp_cr) + "\n";
        }
        fj["blocks"] = std::move(blocks);
        frames.push_back(std::move(fj));
    }
    root["frames"] = std::move(frames);

    ensure_dir(config.out_dir);
    write_json(config.out_dir / "qpmap.json", root);
    write_text(config.out_dir / "qpmap.csv", csv);
}

void run_simulate(const RunConfig& config) {
    config.validate();
    if (config.modes.size() != 1)
        throw ConfigError("simulate takes exactly one mode");
    const QpMode mode = config.modes.front();

    // Validate the input before any output file is created.
    { FrameReader probe(config.input, config.spec); }
    ensure_dir(config.out_dir);

    std::string jnd_csv = "frame,index,q_max_y,q_max_cb,q_max_cr,l_y,w_cb,w_cr,pass_y,pass_cb,pass_cr\n";
    SimulateSinks sinks;
    sinks.out_dir = config.out_dir;
    sinks.ssim_maps = config.emit_ssim_maps;
    sinks.jnd_csv = &jnd_csv;

    std::optional<FrameWriter> recon_writer;
    if (config.emit_recon) {
        const auto [first, last] = config.frame_range();
        VideoSpec recon_spec = config.spec;
        recon_spec.frame_count = last - first + 1;
        recon_writer.emplace(config.out_dir / "recon.yuv", recon_spec);
        sinks.recon = &*recon_writer;
    }

    const SequenceOutcome outcome = run_sequence(config, mode, &sinks);

    ordered_json root = header_json(config);
    root["mode"] = qp_mode_name(mode);
    root["per_frame"] = outcome.per_frame;
    root["aggregate"] = outcome.aggregate_json(config.spec.bit_depth);

    write_json(config.out_dir / "report.json", root);
    write_text(config.out_dir / "jnd_blocks.csv", jnd_csv);
}

void run_compare(const RunConfig& config) {
    config.validate();
    if (config.modes.size() < 2)
        throw ConfigError("compare needs at least two modes");

    { FrameReader probe(config.input, config.spec); }

    std::vector<SequenceOutcome> outcomes;
    outcomes.reserve(config.modes.size());
    for (QpMode mode : config.modes)
        outcomes.push_back(run_sequence(config, mode, nullptr));

    ordered_json root = header_json(config);
    ordered_json mode_names = ordered_json::array();
    for (QpMode m : config.modes) mode_names.push_back(qp_mode_name(m));
    root["modes"] = mode_names;

    ordered_json per_mode;
    for (size_t i = 0; i < config.modes.size(); ++i) {
        ordered_json mj;
        mj["aggregate"] = outcomes[i].aggregate_json(config.spec.bit_depth);
        mj["per_frame"] = outcomes[i].per_frame;
        per_mode[qp_mode_name(config.modes[i])] = std::move(mj);
    }
    root["per_mode"] = std::move(per_mode);

    // The first requested mode is measured against each of the others.
    const SequenceOutcome& lead = outcomes.front();
    ordered_json comparisons = ordered_json::array();
    for (size_t i = 1; i < config.modes.size(); ++i) {
        const SequenceOutcome& base = outcomes[i];
        ordered_json cj;
        cj["mode"] = qp_mode_name(config.modes.front());
        cj["baseline"] = qp_mode_name(config.modes[i]);

        const double lead_chroma = lead.bits[1] + lead.bits[2];
        const double base_chroma = base.bits[1] + base.bits[2];
        cj["chroma_bits_reduction_percent"] =
            base_chroma > 0 ? 100.0 * (1.0 - lead_chroma / base_chroma) : 0.0;
        cj["total_bits_reduction_percent"] =
            (base.bits[0] + base_chroma) > 0
                ? 100.0 * (1.0 - (lead.bits[0] + lead_chroma) / (base.bits[0] + base_chroma))
                : 0.0;

        const ChannelTriple lp = lead.pooled_psnr(config.spec.bit_depth);
        const ChannelTriple bp = base.pooled_psnr(config.spec.bit_depth);
        const ChannelTriple ls = lead.mean_ssim();
        const ChannelTriple bs = base.mean_ssim();
        auto delta = [](double a, double b) { return a == b ? 0.0 : a - b; };
        cj["psnr_delta"] = ordered_json{{"y", num_or_inf(delta(lp.y, bp.y))},
                                        {"cb", num_or_inf(delta(lp.cb, bp.cb))},
                                        {"cr", num_or_inf(delta(lp.cr, bp.cr))}};
        cj["ssim_delta"] = ordered_json{
            {"y", delta(ls.y, bs.y)}, {"cb", delta(ls.cb, bs.cb)}, {"cr", delta(ls.cr, bs.cr)}};
        auto pct = [&delta](double a, double b) {
            return std::isfinite(a) && std::isfinite(b) && b != 0 ? 100.0 * delta(a, b) / b : 0.0;
        };
        cj["psnr_delta_percent"] = ordered_json{
            {"y", pct(lp.y, bp.y)}, {"cb", pct(lp.cb, bp.cb)}, {"cr", pct(lp.cr, bp.cr)}};
        cj["ssim_delta_percent"] = ordered_json{
            {"y", pct(ls.y, bs.y)}, {"cb", pct(ls.cb, bs.cb)}, {"cr", pct(ls.cr, bs.cr)}};
        comparisons.push_back(std::move(cj));
    }
    root["comparisons"] = std::move(comparisons);

    ensure_dir(config.out_dir);
    write_json(config.out_dir / "compare.json", root);
}

void run_curves(const std::vector<int>& bit_depths, int n_points,
                const std::filesystem::path& out_dir, const JndParams& params) {
    if (bit_depths.empty())
        throw ConfigError("at least one bit depth is required");
    // Build all tables (validating inputs) before touching the filesystem.
    struct Table {
        std::string name;
        std::vector<std::pair<double, double>> rows;
    };
    std::vector<Table> tables;
    for (int b : bit_depths) {
        VideoSpec probe{.width = 2, .height = 2, .bit_depth = b};
        probe.validate();
        auto luma = curve_table(b, n_points, CurveKind::Luma, params);
        auto chroma = curve_table(b, n_points, CurveKind::Chroma, params);
        tables.push_back({"curve_luma_b" + std::to_string(b) + ".csv", std::move(luma)});
        tables.push_back({"curve_chroma_b" + std::to_string(b) + ".csv", std::move(chroma)});
    }
    ensure_dir(out_dir);
    for (const Table& t : tables) {
        std::string csv = "mu,weight\n";
        for (const auto& [mu, w] : t.rows) csv += json_num(mu) + "," + json_num(w) + "\n";
        write_text(out_dir / t.name, csv);
    }
}

std::string info_json(const RunConfig& config, bool check_file) {
    config.spec.validate();
    ordered_json j;
    j["spec"] = spec_json(config.spec);
    j["container_bytes"] = container_bytes(config.spec.bit_depth);
    j["frame_byte_size"] = frame_byte_size(config.spec);
    j["sequence_bytes"] = sequence_byte_size(config.spec);
    j["sequence_gib"] = static_cast<double>(sequence_byte_size(config.spec)) / (1024.0 * 1024.0 * 1024.0);
    if (check_file) {
        std::error_code ec;
        if (!std::filesystem::exists(config.input, ec))
            throw IoError("input file not found: " + config.input.string());
        const auto actual = static_cast<std::int64_t>(std::filesystem::file_size(config.input, ec));
        j["file_bytes"] = actual;
        j["size_matches"] = actual == sequence_byte_size(config.spec);
    }
    return j.dump(2) + "\n";
}

} // namespace pixelpaq
