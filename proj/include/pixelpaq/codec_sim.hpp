#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pixelpaq/pquant.hpp"

namespace pixelpaq {

inline constexpr double kDefaultDeadzoneTheta = 1.0 / 3.0;

// Separable orthonormal 2-D DCT-II over a w*h row-major block.
// w and h must be powers of two >= 4. Parseval holds exactly up to rounding.
std::vector<double> forward_transform(std::span<const double> block, int w, int h);
std::vector<double> inverse_transform(std::span<const double> coeffs, int w, int h);

// Dead-zone uniform quantiser: level = sign(c) * floor(|c| / qstep + theta).
std::vector<std::int64_t> quantize(std::span<const double> coeffs, double qstep,
                                   double theta = kDefaultDeadzoneTheta);

// Uniform reconstruction: c' = level * qstep.
std::vector<double> dequantize(std::span<const std::int64_t> levels, double qstep);

// Per-CB simulation outcome. q_max_* are pixel-domain max abs errors over the
// valid region; pass_* compare them against the CB's JND thresholds.
struct CbSimStats {
    int luma_index = 0;
    double q_max_y = 0, q_max_cb = 0, q_max_cr = 0;
    std::int64_t nonzero_y = 0, nonzero_cb = 0, nonzero_cr = 0;
    double bits_y = 0, bits_cb = 0, bits_cr = 0;
    bool pass_y = true, pass_cb = true, pass_cr = true;

    double bits_total() const { return bits_y + bits_cb + bits_cr; }
};

struct SimResult {
    Frame recon;
    std::vector<CbSimStats> per_cb;

    double bits(Channel ch) const;
    std::int64_t pass_count(Channel ch) const;
};

// Intra-style transform/quantise/reconstruct pass over every CB:
// residual = samples - round(mean), orthonormal DCT, dead-zone quantisation
// with the map's channel QStep, inverse, clip to [0, 2^b - 1]. The bit proxy
// per channel is sum(log2(1 + |level|)) plus one sign bit per nonzero level.
SimResult simulate_frame(const Frame& frame, const BlockGrid& grid, const QpMap& map,
                         int bit_depth, double theta = kDefaultDeadzoneTheta);

} // namespace pixelpaq
