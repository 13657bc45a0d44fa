#include "pixelpaq/block_model.hpp"

#include <algorithm>

namespace pixelpaq {

const char* channel_name(Channel c) {
    switch (c) {
    case Channel::Y: return "Y";
    case Channel::Cb: return "Cb";
    case Channel::Cr: return "Cr";
    }
    return "?";
}

BlockGrid partition(const VideoSpec& spec, int cb_size) {
    spec.validate();
    if (cb_size != 16 && cb_size != 32 && cb_size != 64)
        throw ConfigError("unsupported coding block size " + std::to_string(cb_size));

    BlockGrid grid;
    grid.cb_size = cb_size;
    grid.cols = (spec.width + cb_size - 1) / cb_size;
    grid.rows = (spec.height + cb_size - 1) / cb_size;

    const int sx = spec.chroma_format == ChromaFormat::C444 ? 1 : 2;
    const int sy = spec.chroma_format == ChromaFormat::C420 ? 2 : 1;
    const int cw = cb_size / sx;
    const int ch = cb_size / sy;

    grid.luma_blocks.reserve(static_cast<size_t>(grid.cols) * grid.rows);
    grid.cb_blocks.reserve(grid.luma_blocks.capacity());
    grid.cr_blocks.reserve(grid.luma_blocks.capacity());

    int index = 0;
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx, ++index) {
            grid.luma_blocks.push_back({Channel::Y, bx * cb_size, by * cb_size, cb_size, cb_size, index});
            grid.cb_blocks.push_back({Channel::Cb, bx * cw, by * ch, cw, ch, index});
            grid.cr_blocks.push_back({Channel::Cr, bx * cw, by * ch, cw, ch, index});
        }
    }
    return grid;
}

namespace {

void check_block(const Plane& plane, const CodingBlock& block) {
    if (block.x < 0 || block.y < 0 || block.x >= plane.width || block.y >= plane.height)
        throw DataError(std::string("block origin outside ") + channel_name(block.channel) +
                        " plane: block does not belong to this channel's grid");
}

} // namespace

int valid_width(const Plane& plane, const CodingBlock& block) {
    return std::min(block.w, plane.width - block.x);
}

int valid_height(const Plane& plane, const CodingBlock& block) {
    return std::min(block.h, plane.height - block.y);
}

std::vector<std::uint16_t> block_samples(const Plane& plane, const CodingBlock& block) {
    check_block(plane, block);
    std::vector<std::uint16_t> out(static_cast<size_t>(block.w) * block.h);
    for (int r = 0; r < block.h; ++r) {
        const int sy = std::min(block.y + r, plane.height - 1);
        for (int c = 0; c < block.w; ++c) {
            const int sx = std::min(block.x + c, plane.width - 1);
            out[static_cast<size_t>(r) * block.w + c] = plane.at(sx, sy);
        }
    }
    return out;
}

std::vector<std::uint16_t> valid_samples(const Plane& plane, const CodingBlock& block) {
    check_block(plane, block);
    const int vw = valid_width(plane, block);
    const int vh = valid_height(plane, block);
    std::vector<std::uint16_t> out(static_cast<size_t>(vw) * vh);
    for (int r = 0; r < vh; ++r)
        for (int c = 0; c < vw; ++c)
            out[static_cast<size_t>(r) * vw + c] = plane.at(block.x + c, block.y + r);
    return out;
}

} // namespace pixelpaq
