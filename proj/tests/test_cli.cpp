#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "pixelpaq/yuv_io.hpp"
#include "synthetic.hpp"

using json = nlohmann::json;
using namespace pixelpaq;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::path("scratch_cli") / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const std::filesystem::path& capture = "cli_out.txt") {
    const std::string cmd =
        std::string(PIXELPAQ_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path make_input(const std::filesystem::path& dir, const VideoSpec& spec) {
    const auto path = dir / "input.yuv";
    testsupport::write_synthetic_sequence(path, spec);
    return path;
}

} // namespace

TEST_CASE("info reports byte accounting and exits zero") {
    const auto dir = scratch("info");
    const int rc = run_cli("info --width 1920 --height 1080 --bit-depth 10 --chroma 444 "
                           "--frame-count 600",
                           dir / "out.txt");
    CHECK(rc == 0);
    const json j = json::parse(slurp(dir / "out.txt"));
    CHECK(j["sequence_bytes"] == 7464960000);
    CHECK(j["frame_byte_size"] == 12441600);
}

TEST_CASE("info validates a file's size when given one") {
    const auto dir = scratch("info_file");
    const VideoSpec spec{32, 32, 8, ChromaFormat::C420, 2};
    const auto input = make_input(dir, spec);
    CHECK(run_cli("info -i " + input.string() + " --width 32 --height 32 --chroma 420",
                  dir / "ok.txt") == 0);
    const json j = json::parse(slurp(dir / "ok.txt"));
    CHECK(j["spec"]["frame_count"] == 2);  // derived from the file size
    CHECK(j["size_matches"] == true);

    // wrong geometry: the file no longer divides into whole frames
    CHECK(run_cli("info -i " + input.string() + " --width 34 --height 32 --chroma 420",
                  dir / "bad.txt") == 4);
}

TEST_CASE("usage errors exit 2") {
    const auto dir = scratch("usage");
    CHECK(run_cli("analyze", dir / "a.txt") == 2);                             // missing input
    CHECK(run_cli("analyze --input x --chroma 411", dir / "b.txt") == 2);      // bad enum
    CHECK(run_cli("frobnicate", dir / "c.txt") == 2);                          // no such command
    CHECK(run_cli("curves --points 1 --out " + (dir / "o").string(), dir / "d.txt") == 2);
    CHECK(run_cli("--help", dir / "h.txt") == 0);
}

TEST_CASE("missing input exits 3 with no partial output") {
    const auto dir = scratch("missing");
    const auto out = dir / "out";
    const int rc = run_cli("analyze -i " + (dir / "nope.yuv").string() +
                               " --width 64 --height 64 --chroma 444 --frame-count 1 -o " +
                               out.string(),
                           dir / "log.txt");
    CHECK(rc == 3);
    CHECK(!std::filesystem::exists(out / "qpmap.json"));
}

TEST_CASE("truncated input exits 4") {
    const auto dir = scratch("truncated");
    const auto path = dir / "short.yuv";
    { std::ofstream(path, std::ios::binary) << std::string(100, '\0'); }
    const int rc = run_cli("analyze -i " + path.string() +
                               " --width 64 --height 64 --chroma 444 --frame-count 1 -o " +
                               (dir / "out").string(),
                           dir / "log.txt");
    CHECK(rc == 4);
}

TEST_CASE("analyze end to end with flags") {
    const auto dir = scratch("analyze");
    const VideoSpec spec{64, 48, 10, ChromaFormat::C422, 2};
    const auto input = make_input(dir, spec);
    const int rc = run_cli("analyze -i " + input.string() +
                               " --width 64 --height 48 --bit-depth 10 --chroma 422 "
                               "--qp 27 --cb-size 32 --mode pixel-paq -o " +
                               (dir / "out").string(),
                           dir / "log.txt");
    CHECK(rc == 0);
    const json j = json::parse(slurp(dir / "out" / "qpmap.json"));
    CHECK(j["base_qp"] == 27);
    CHECK(j["cb_size"] == 32);
    CHECK(j["spec"]["frame_count"] == 2);
    CHECK(j["frames"].size() == 2);
    CHECK(j["frames"][0]["blocks"].size() == 4);  // 64x48 at cb 32 -> 2x2
}

TEST_CASE("spec sidecar is picked up implicitly") {
    const auto dir = scratch("sidecar");
    const VideoSpec spec{48, 48, 8, ChromaFormat::C444, 1};
    const auto input = make_input(dir, spec);
    {
        std::ofstream out(input.string() + ".json");
        out << R"({"width": 48, "height": 48, "bit_depth": 8, "chroma_format": "444"})";
    }
    const int rc =
        run_cli("analyze -i " + input.string() + " -o " + (dir / "out").string(), dir / "log.txt");
    CHECK(rc == 0);
    const json j = json::parse(slurp(dir / "out" / "qpmap.json"));
    CHECK(j["spec"]["width"] == 48);
    CHECK(j["spec"]["frame_count"] == 1);
}

TEST_CASE("simulate and compare end to end") {
    const auto dir = scratch("simulate");
    const VideoSpec spec{64, 64, 10, ChromaFormat::C444, 2};
    const auto input = make_input(dir, spec);
    const std::string common = " -i " + input.string() +
                               " --width 64 --height 64 --bit-depth 10 --chroma 444 --qp 32 ";
    CHECK(run_cli("simulate" + common + "--emit-recon -o " + (dir / "sim").string(),
                  dir / "log1.txt") == 0);
    CHECK(std::filesystem::exists(dir / "sim" / "report.json"));
    CHECK(std::filesystem::exists(dir / "sim" / "jnd_blocks.csv"));
    CHECK(std::filesystem::exists(dir / "sim" / "recon.yuv"));
    CHECK(frame_byte_size(spec) * 2 ==
          static_cast<std::int64_t>(std::filesystem::file_size(dir / "sim" / "recon.yuv")));

    CHECK(run_cli("compare" + common + "--mode pixel-paq idsq -o " + (dir / "cmpA").string(),
                  dir / "log2.txt") == 0);
    CHECK(run_cli("compare" + common + "--mode pixel-paq idsq -o " + (dir / "cmpB").string(),
                  dir / "log3.txt") == 0);
    // byte-identical across processes
    CHECK(slurp(dir / "cmpA" / "compare.json") == slurp(dir / "cmpB" / "compare.json"));

    // one mode is a usage error
    CHECK(run_cli("compare" + common + "--mode idsq -o " + (dir / "cmpC").string(),
                  dir / "log4.txt") == 2);

    // inclusive frame ranges
    CHECK(run_cli("simulate" + common + "--frames 1..1 -o " + (dir / "simR").string(),
                  dir / "log5.txt") == 0);
    const json r = json::parse(slurp(dir / "simR" / "report.json"));
    REQUIRE(r["per_frame"].size() == 1);
    CHECK(r["per_frame"][0]["frame"] == 1);
    CHECK(run_cli("simulate" + common + "--frames 0..2 -o " + (dir / "simS").string(),
                  dir / "log6.txt") == 2);  // past the last frame
    CHECK(run_cli("simulate" + common + "--frames nope -o " + (dir / "simT").string(),
                  dir / "log7.txt") == 2);
}

TEST_CASE("tuning flags reach the report header") {
    const auto dir = scratch("flags");
    const VideoSpec spec{32, 32, 8, ChromaFormat::C444, 1};
    const auto input = make_input(dir, spec);
    const int rc = run_cli("analyze -i " + input.string() +
                               " --width 32 --height 32 --chroma 444 --cb-size 32 "
                               "--exact-weights --no-knee-scaling --theta 0.25 -o " +
                               (dir / "out").string(),
                           dir / "log.txt");
    CHECK(rc == 0);
    const json j = json::parse(slurp(dir / "out" / "qpmap.json"));
    CHECK(j["exact_weights"] == true);
    CHECK(j["deadzone_theta"] == 0.25);
    CHECK(j["params"]["scale_chroma_knees"] == false);
}

TEST_CASE("curves writes one csv pair per bit depth") {
    const auto dir = scratch("curves");
    CHECK(run_cli("curves --bit-depth 8 10 --points 33 -o " + (dir / "out").string(),
                  dir / "log.txt") == 0);
    CHECK(std::filesystem::exists(dir / "out" / "curve_luma_b8.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "curve_chroma_b10.csv"));
}
