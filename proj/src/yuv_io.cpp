#include "pixelpaq/yuv_io.hpp"

#include <array>
#include <cstring>

namespace pixelpaq {

namespace {

constexpr std::array<int, 4> kBitDepths = {8, 10, 12, 16};

bool supported_bit_depth(int b) {
    for (int d : kBitDepths)
        if (d == b) return true;
    return false;
}

} // namespace

const char* chroma_format_name(ChromaFormat cf) {
    switch (cf) {
    case ChromaFormat::C420: return "420";
    case ChromaFormat::C422: return "422";
    case ChromaFormat::C444: return "444";
    }
    return "?";
}

ChromaFormat chroma_format_from_name(const std::string& name) {
    if (name == "420") return ChromaFormat::C420;
    if (name == "422") return ChromaFormat::C422;
    if (name == "444") return ChromaFormat::C444;
    throw ConfigError("unknown chroma format '" + name + "' (expected 420, 422 or 444)");
}

void VideoSpec::validate() const {
    if (width <= 0 || height <= 0)
        throw ConfigError("frame dimensions must be positive");
    if (!supported_bit_depth(bit_depth))
        throw ConfigError("bit depth must be 8, 10, 12 or 16");
    if (chroma_format != ChromaFormat::C444 && width % 2 != 0)
        throw ConfigError("subsampled chroma requires even width");
    if (chroma_format == ChromaFormat::C420 && height % 2 != 0)
        throw ConfigError("4:2:0 requires even height");
    if (frame_count < 1)
        throw ConfigError("frame count must be >= 1");
}

int VideoSpec::chroma_width() const {
    return chroma_format == ChromaFormat::C444 ? width : width / 2;
}

int VideoSpec::chroma_height() const {
    return chroma_format == ChromaFormat::C420 ? height / 2 : height;
}

int container_bytes(int bit_depth) {
    return bit_depth == 8 ? 1 : 2;
}

std::int64_t frame_byte_size(const VideoSpec& spec) {
    const std::int64_t luma = static_cast<std::int64_t>(spec.width) * spec.height;
    const std::int64_t chroma = static_cast<std::int64_t>(spec.chroma_width()) * spec.chroma_height();
    return (luma + 2 * chroma) * container_bytes(spec.bit_depth);
}

std::int64_t sequence_byte_size(const VideoSpec& spec) {
    return frame_byte_size(spec) * spec.frame_count;
}

Frame make_frame(const VideoSpec& spec) {
    Frame f;
    f.y = Plane(spec.width, spec.height);
    f.cb = Plane(spec.chroma_width(), spec.chroma_height());
    f.cr = Plane(spec.chroma_width(), spec.chroma_height());
    return f;
}

void check_frame(const Frame& frame, const VideoSpec& spec) {
    const Plane* planes[3] = {&frame.y, &frame.cb, &frame.cr};
    const char* names[3] = {"Y", "Cb", "Cr"};
    const int widths[3] = {spec.width, spec.chroma_width(), spec.chroma_width()};
    const int heights[3] = {spec.height, spec.chroma_height(), spec.chroma_height()};
    const int max = spec.max_sample();
    for (int p = 0; p < 3; ++p) {
        const Plane& pl = *planes[p];
        if (pl.width != widths[p] || pl.height != heights[p])
            throw DataError(std::string("plane ") + names[p] + " dims do not match spec");
        if (pl.samples.size() != static_cast<size_t>(pl.width) * pl.height)
            throw DataError(std::string("plane ") + names[p] + " sample count does not match dims");
        for (size_t i = 0; i < pl.samples.size(); ++i) {
            if (pl.samples[i] > max)
                throw DataError(std::string("plane ") + names[p] + " sample " + std::to_string(i) +
                                " = " + std::to_string(pl.samples[i]) + " exceeds " +
                                std::to_string(max));
        }
    }
}

namespace {

void read_plane(std::ifstream& in, Plane& plane, int bit_depth, const char* name) {
    const size_t n = static_cast<size_t>(plane.width) * plane.height;
    const int max = (1 << bit_depth) - 1;
    if (bit_depth == 8) {
        std::vector<std::uint8_t> raw(n);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
        if (!in) throw IoError("short read on plane");
        for (size_t i = 0; i < n; ++i) plane.samples[i] = raw[i];
        return;
    }
    std::vector<std::uint8_t> raw(n * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("short read on plane");
    for (size_t i = 0; i < n; ++i) {
        const std::uint16_t v =
            static_cast<std::uint16_t>(raw[2 * i] | (static_cast<std::uint16_t>(raw[2 * i + 1]) << 8));
        if (v > max)
            throw DataError(std::string("sample out of range in plane ") + name + " at index " +
                            std::to_string(i) + ": " + std::to_string(v) + " > " +
                            std::to_string(max));
        plane.samples[i] = v;
    }
}

void write_plane(std::ofstream& out, const Plane& plane, int bit_depth) {
    const size_t n = plane.samples.size();
    if (bit_depth == 8) {
        std::vector<std::uint8_t> raw(n);
        for (size_t i = 0; i < n; ++i) raw[i] = static_cast<std::uint8_t>(plane.samples[i]);
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(n));
        return;
    }
    std::vector<std::uint8_t> raw(n * 2);
    for (size_t i = 0; i < n; ++i) {
        raw[2 * i] = static_cast<std::uint8_t>(plane.samples[i] & 0xff);
        raw[2 * i + 1] = static_cast<std::uint8_t>(plane.samples[i] >> 8);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

} // namespace

FrameReader::FrameReader(const std::filesystem::path& path, VideoSpec spec)
    : spec_(spec), path_(path) {
    spec_.validate();
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        throw IoError("input file not found: " + path.string());
    const auto actual = static_cast<std::int64_t>(std::filesystem::file_size(path, ec));
    if (ec) throw IoError("cannot stat " + path.string());
    const auto expected = sequence_byte_size(spec_);
    if (actual != expected)
        throw DataError("size mismatch for " + path.string() + ": expected " +
                        std::to_string(expected) + " bytes, found " + std::to_string(actual));
    in_.open(path, std::ios::binary);
    if (!in_) throw IoError("cannot open " + path.string());
}

Frame FrameReader::read_frame(std::int64_t index) {
    if (index < 0 || index >= spec_.frame_count)
        throw ConfigError("frame index " + std::to_string(index) + " outside [0, " +
                          std::to_string(spec_.frame_count) + ")");
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(index * frame_byte_size(spec_)));
    Frame f = make_frame(spec_);
    read_plane(in_, f.y, spec_.bit_depth, "Y");
    read_plane(in_, f.cb, spec_.bit_depth, "Cb");
    read_plane(in_, f.cr, spec_.bit_depth, "Cr");
    return f;
}

FrameWriter::FrameWriter(const std::filesystem::path& path, VideoSpec spec)
    : spec_(spec), path_(path) {
    spec_.validate();
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
}

void FrameWriter::write_frame(const Frame& frame) {
    check_frame(frame, spec_);
    write_plane(out_, frame.y, spec_.bit_depth);
    write_plane(out_, frame.cb, spec_.bit_depth);
    write_plane(out_, frame.cr, spec_.bit_depth);
    out_.flush();
    if (!out_) throw IoError("write failed on " + path_.string());
}

} // namespace pixelpaq
