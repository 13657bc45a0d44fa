#pragma once

#include <cstdint>
#include <vector>

#include "pixelpaq/yuv_io.hpp"

namespace pixelpaq {

enum class Channel { Y, Cb, Cr };

const char* channel_name(Channel c);

// One coding block of one channel. Blocks at the right/bottom frame edge keep
// their full nominal size; the part outside the plane is handled by edge
// replication, and means/metrics are restricted to the valid region.
struct CodingBlock {
    Channel channel = Channel::Y;
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    int luma_index = 0;  // links chroma blocks to the co-located luma block
};

// Flat tiling of a frame into coding blocks. Chroma blocks mirror the luma
// grid with dimensions scaled by the chroma sampling ratio; Cb and Cr grids
// are always identical.
struct BlockGrid {
    int cb_size = 0;
    int cols = 0;
    int rows = 0;
    std::vector<CodingBlock> luma_blocks;
    std::vector<CodingBlock> cb_blocks;
    std::vector<CodingBlock> cr_blocks;

    int block_count() const { return static_cast<int>(luma_blocks.size()); }
};

// cb_size must be one of 16, 32, 64.
BlockGrid partition(const VideoSpec& spec, int cb_size);

// Width/height of the part of the block that lies inside the plane.
int valid_width(const Plane& plane, const CodingBlock& block);
int valid_height(const Plane& plane, const CodingBlock& block);

// Full w*h block with positions beyond the plane edge filled by clamp-to-edge
// replication. Throws DataError when the block's origin is outside the plane.
std::vector<std::uint16_t> block_samples(const Plane& plane, const CodingBlock& block);

// Only the samples inside the plane (valid_width * valid_height of them).
std::vector<std::uint16_t> valid_samples(const Plane& plane, const CodingBlock& block);

} // namespace pixelpaq
