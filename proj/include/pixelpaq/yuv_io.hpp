#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "pixelpaq/errors.hpp"

namespace pixelpaq {

enum class ChromaFormat { C420, C422, C444 };

const char* chroma_format_name(ChromaFormat cf);           // "420" / "422" / "444"
ChromaFormat chroma_format_from_name(const std::string&);  // throws ConfigError

// Geometry, bit depth and length of a raw planar YCbCr sequence.
struct VideoSpec {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // one of 8, 10, 12, 16
    ChromaFormat chroma_format = ChromaFormat::C420;
    std::int64_t frame_count = 1;

    void validate() const;  // throws ConfigError on any invariant violation

    int chroma_width() const;
    int chroma_height() const;
    int max_sample() const { return (1 << bit_depth) - 1; }

    bool operator==(const VideoSpec&) const = default;
};

// Bytes per stored sample: 1 for 8-bit, 2 (little-endian) above.
int container_bytes(int bit_depth);

std::int64_t frame_byte_size(const VideoSpec& spec);
std::int64_t sequence_byte_size(const VideoSpec& spec);

// One channel of integer samples, row-major.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> samples;

    Plane() = default;
    Plane(int w, int h) : width(w), height(h), samples(static_cast<size_t>(w) * h, 0) {}

    std::uint16_t at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
    std::uint16_t& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }

    bool operator==(const Plane&) const = default;
};

struct Frame {
    Plane y;
    Plane cb;
    Plane cr;

    bool operator==(const Frame&) const = default;
};

// Zero-initialised frame with plane dimensions derived from the spec.
Frame make_frame(const VideoSpec& spec);

// Throws DataError if the frame's plane dims or sample ranges do not match the spec.
void check_frame(const Frame& frame, const VideoSpec& spec);

// Readable raw YUV sequence. Validates total file size against the spec on open.
// Single consumer; frames returned are independent copies.
class FrameReader {
public:
    FrameReader(const std::filesystem::path& path, VideoSpec spec);

    Frame read_frame(std::int64_t index);  // ConfigError on bad index, DataError on bad samples

    const VideoSpec& spec() const { return spec_; }

private:
    std::ifstream in_;
    VideoSpec spec_;
    std::filesystem::path path_;
};

// Appends frames in the bit-exact inverse of FrameReader's layout.
class FrameWriter {
public:
    FrameWriter(const std::filesystem::path& path, VideoSpec spec);

    void write_frame(const Frame& frame);  // DataError on spec mismatch, IoError on write failure

    const VideoSpec& spec() const { return spec_; }

private:
    std::ofstream out_;
    VideoSpec spec_;
    std::filesystem::path path_;
};

} // namespace pixelpaq
