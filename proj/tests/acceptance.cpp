// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expected values come from independent oracles evaluated in place
// (closed forms, naive transforms, exact arithmetic), never from the code
// under test.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pixelpaq/report.hpp"
#include "synthetic.hpp"

using namespace pixelpaq;
using json = nlohmann::json;

namespace {

int g_failures = 0;
std::string g_detail;

void note(const std::string& msg) {
    if (!g_detail.empty()) g_detail += "; ";
    g_detail += msg;
}

bool expect(bool ok, const std::string& msg) {
    if (!ok) note(msg);
    return ok;
}

void criterion(int n, const char* name, bool ok) {
    std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", n, name);
    if (!ok) {
        std::printf("        %s\n", g_detail.c_str());
        ++g_failures;
    }
    g_detail.clear();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double rnd(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * (rng() / 4294967296.0);
}

// ---- criteria -------------------------------------------------------------

bool curve_identities() {
    bool ok = expect(luma_weight(0, 8) == 3.0, "L(0,8) != 3");
    ok &= expect(luma_weight(128, 8) == 1.0, "L(128,8) != 1");
    const double oracle = 0.8 * std::pow(510.0 / 256.0 - 1.0, 2.0) + 1.0;
    ok &= expect(std::abs(luma_weight(255, 8) - oracle) <= 1e-6,
                 "L(255,8) deviates from the closed form");
    return ok;
}

bool bit_depth_invariance() {
    for (int mu = 0; mu <= 255; ++mu) {
        const double w = luma_weight(mu, 8);
        if (!expect(std::abs(w - luma_weight(4.0 * mu, 10)) <= 1e-12 &&
                        std::abs(w - luma_weight(16.0 * mu, 12)) <= 1e-12 &&
                        std::abs(w - luma_weight(256.0 * mu, 16)) <= 1e-12,
                    "mismatch at mu=" + std::to_string(mu)))
            return false;
    }
    return true;
}

bool chroma_identities() {
    bool ok = true;
    for (int b : {8, 10, 12, 16}) {
        const double s = std::exp2(b - 8);
        const double max = std::exp2(b) - 1;
        const std::string tag = " at b=" + std::to_string(b);
        ok &= expect(std::abs(chroma_weight(0, b) - 3.0) <= 1e-12, "C(0) != 3" + tag);
        ok &= expect(std::abs(chroma_weight(85.0 * s, b) - 1.0) <= 1e-12, "C(h') != 1" + tag);
        ok &= expect(std::abs(chroma_weight(90.0 * s, b) - 1.0) <= 1e-12, "C(j') != 1" + tag);
        ok &= expect(std::abs(chroma_weight(max, b) - 3.0) <= 1e-12, "C(max) != 3" + tag);
        for (double knee : {85.0 * s, 90.0 * s}) {
            const double lo = chroma_weight(knee - 1e-6, b);
            const double hi = chroma_weight(knee + 1e-6, b);
            ok &= expect(std::abs(lo - hi) <= 1e-6, "knee discontinuity" + tag);
        }
    }
    return ok;
}

bool qp_round_trip() {
    for (int qp = 0; qp <= 51; ++qp)
        if (!expect(qp_from_qstep(qstep_from_qp(qp)) == qp, "qp=" + std::to_string(qp)))
            return false;
    return true;
}

bool quantiser_error_bound() {
    std::mt19937 rng(20240815);
    const double theta = 1.0 / 3.0;
    for (int i = 0; i < 100000; ++i) {
        const double c = rnd(rng, -10000.0, 10000.0);
        const double qstep = rnd(rng, 1.0, 100.0);
        const double rec = dequantize(quantize(std::vector<double>{c}, qstep, theta), qstep)[0];
        const double e = c - rec;
        if (!expect(std::abs(e) < qstep, "|e| >= qstep at c=" + std::to_string(c))) return false;
        const bool in_interval = c >= 0 ? (e >= -theta * qstep - 1e-9 && e < (1 - theta) * qstep + 1e-9)
                                        : (e > -(1 - theta) * qstep - 1e-9 && e <= theta * qstep + 1e-9);
        if (!expect(in_interval, "error outside the dead-zone interval at c=" + std::to_string(c)))
            return false;
    }
    return true;
}

bool transform_fidelity() {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> block(64 * 64);
        for (auto& v : block) v = rnd(rng, 0.0, 65535.0);
        const auto coeffs = forward_transform(block, 64, 64);
        double ein = 0, eout = 0, err = 0;
        const auto back = inverse_transform(coeffs, 64, 64);
        for (size_t i = 0; i < block.size(); ++i) {
            ein += block[i] * block[i];
            eout += coeffs[i] * coeffs[i];
            err = std::max(err, std::abs(back[i] - block[i]));
        }
        if (!expect(err <= 1e-6, "round-trip error " + std::to_string(err))) return false;
        if (!expect(std::abs(eout - ein) <= 1e-6 * ein, "Parseval violation")) return false;
    }
    // 8x8 forward against the naive O(n^4) DCT-II
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(64);
        for (auto& v : x) v = rnd(rng, -255.0, 255.0);
        const auto fast = forward_transform(x, 8, 8);
        for (int k = 0; k < 8; ++k) {
            for (int l = 0; l < 8; ++l) {
                double acc = 0;
                for (int m = 0; m < 8; ++m)
                    for (int n = 0; n < 8; ++n)
                        acc += x[static_cast<size_t>(m) * 8 + n] *
                               std::cos(std::numbers::pi * (2 * m + 1) * k / 16.0) *
                               std::cos(std::numbers::pi * (2 * n + 1) * l / 16.0);
                acc *= (k == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8)) *
                       (l == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8));
                if (!expect(std::abs(fast[static_cast<size_t>(k) * 8 + l] - acc) <= 1e-9,
                            "8x8 oracle mismatch"))
                    return false;
            }
        }
    }
    return true;
}

// Shared state for the sequence-level criteria.
struct Bench {
    std::filesystem::path dir;
    std::filesystem::path input;
    VideoSpec spec;
    RunConfig compare_config() const {
        RunConfig cfg;
        cfg.input = input;
        cfg.spec = spec;
        cfg.base_qp = 27;
        cfg.modes = {QpMode::PixelPaq, QpMode::Idsq};
        return cfg;
    }
};

Bench make_bench() {
    Bench b;
    b.dir = "scratch_acceptance";
    std::filesystem::remove_all(b.dir);
    std::filesystem::create_directories(b.dir);
    b.spec = testsupport::benchmark_spec();
    b.input = b.dir / "bench.yuv";
    testsupport::write_synthetic_sequence(b.input, b.spec);
    return b;
}

bool directional_comparison(const Bench& bench) {
    RunConfig cfg = bench.compare_config();
    cfg.out_dir = bench.dir / "compare";
    run_compare(cfg);
    const json j = json::parse(slurp(cfg.out_dir / "compare.json"));

    bool ok = true;
    const json& pp = j["per_mode"]["pixel-paq"]["per_frame"];
    const json& id = j["per_mode"]["idsq"]["per_frame"];
    ok &= expect(pp.size() == 32 && id.size() == 32, "expected 32 frames per mode");
    for (size_t i = 0; i < pp.size() && ok; ++i) {
        ok &= expect(pp[i]["psnr"]["y"] == id[i]["psnr"]["y"],
                     "luma psnr differs at frame " + std::to_string(i));
        ok &= expect(pp[i]["bits_proxy"]["chroma"].get<double>() <=
                         id[i]["bits_proxy"]["chroma"].get<double>(),
                     "chroma bits not dominated at frame " + std::to_string(i));
    }
    const json& cmp = j["comparisons"][0];
    const double reduction = cmp["chroma_bits_reduction_percent"].get<double>();
    ok &= expect(cmp["psnr_delta"]["y"].get<double>() == 0.0, "aggregate luma psnr delta nonzero");
    ok &= expect(reduction >= 10.0,
                 "chroma bits reduction " + std::to_string(reduction) + "% below 10%");
    ok &= expect(cmp["psnr_delta"]["cb"].get<double>() <= 0.0, "cb psnr delta positive");
    ok &= expect(cmp["psnr_delta"]["cr"].get<double>() <= 0.0, "cr psnr delta positive");
    ok &= expect(cmp["ssim_delta"]["cb"].get<double>() <= 0.0, "cb ssim delta positive");
    ok &= expect(cmp["ssim_delta"]["cr"].get<double>() <= 0.0, "cr ssim delta positive");
    return ok;
}

bool qp_offset_chain() {
    const LumaQp strong = perceptual_luma(22, 3.0);
    bool ok = expect(strong.pqp == 32, "pqp_y != 32 for l_y=3");
    ok &= expect(chroma_offset(strong.pqp, 3.0).oqp == 41, "oqp != 41 for w=3");
    const LumaQp unit = perceptual_luma(22, 1.0);
    ok &= expect(unit.pqp == 22, "pqp_y != 22 for l_y=1");
    ok &= expect(chroma_offset(unit.pqp, 1.0).oqp == 25, "oqp != 25 for w=1");
    return ok;
}

bool raw_size_accounting() {
    const VideoSpec spec{1920, 1080, 10, ChromaFormat::C444, 600};
    const std::int64_t bytes = sequence_byte_size(spec);
    bool ok = expect(bytes == 7464960000, "sequence bytes = " + std::to_string(bytes));
    const double gib = static_cast<double>(bytes) / (1024.0 * 1024.0 * 1024.0);
    ok &= expect(std::abs(gib - 6.95) <= 0.01 * 6.95, "GiB " + std::to_string(gib));
    return ok;
}

bool jnd_compliance(const Bench& bench) {
    bool ok = true;

    // Constant colour passes everywhere, at every initial QP.
    const VideoSpec cspec{416, 240, 10, ChromaFormat::C444, 1};
    const Frame constant = testsupport::constant_frame(cspec, 512, 300, 700);
    const BlockGrid cgrid = partition(cspec, 64);
    for (int qp : {22, 27, 32, 37}) {
        const QpMap map = build_qp_map(constant, cgrid, qp, QpMode::PixelPaq, 10);
        const SimResult sim = simulate_frame(constant, cgrid, map, 10);
        for (const CbSimStats& s : sim.per_cb)
            ok &= expect(s.pass_y && s.pass_cb && s.pass_cr,
                         "constant frame fails at qp " + std::to_string(qp));
        if (!ok) return false;
    }

    // Pass-rate table over the synthetic sequence, non-increasing in base QP.
    FrameReader reader(bench.input, bench.spec);
    const BlockGrid grid = partition(bench.spec, 64);
    std::printf("        jnd pass rates (pixel-paq): ");
    double prev = 1.1;
    for (int qp : {22, 27, 32, 37}) {
        std::int64_t pass = 0, total = 0;
        for (std::int64_t f = 0; f < bench.spec.frame_count; ++f) {
            const Frame frame = reader.read_frame(f);
            const QpMap map = build_qp_map(frame, grid, qp, QpMode::PixelPaq, 10);
            const SimResult sim = simulate_frame(frame, grid, map, 10);
            for (const CbSimStats& s : sim.per_cb) {
                pass += (s.pass_y ? 1 : 0) + (s.pass_cb ? 1 : 0) + (s.pass_cr ? 1 : 0);
                total += 3;
            }
        }
        const double rate = static_cast<double>(pass) / static_cast<double>(total);
        std::printf("qp%d=%.4f ", qp, rate);
        ok &= expect(rate <= prev + 1e-12, "pass rate rises at qp " + std::to_string(qp));
        prev = rate;
    }
    std::printf("\n");
    return ok;
}

bool determinism(const Bench& bench) {
    RunConfig cfg = bench.compare_config();
    cfg.out_dir = bench.dir / "det_a";
    run_compare(cfg);
    cfg.out_dir = bench.dir / "det_b";
    run_compare(cfg);
    const std::string a = slurp(bench.dir / "det_a" / "compare.json");
    const std::string b = slurp(bench.dir / "det_b" / "compare.json");
    return expect(!a.empty() && a == b, "compare.json differs between runs");
}

} // namespace

int main() {
    criterion(1, "luma curve identities", curve_identities());
    criterion(2, "luma bit-depth invariance", bit_depth_invariance());
    criterion(3, "chroma curve identities and knee continuity", chroma_identities());
    criterion(4, "qp <-> qstep round trip", qp_round_trip());
    criterion(5, "dead-zone quantiser error bound", quantiser_error_bound());
    criterion(6, "transform fidelity", transform_fidelity());

    const Bench bench = make_bench();
    criterion(7, "directional pixel-paq vs idsq comparison", directional_comparison(bench));
    criterion(8, "qp offset chain", qp_offset_chain());
    criterion(9, "raw size accounting", raw_size_accounting());
    criterion(10, "jnd compliance reporting", jnd_compliance(bench));
    criterion(11, "byte-identical compare reruns", determinism(bench));

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
