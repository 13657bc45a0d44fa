#include "pixelpaq/codec_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace pixelpaq {

namespace {

bool pow2_geq4(int n) {
    return n >= 4 && (n & (n - 1)) == 0;
}

// Orthonormal DCT-II basis: row k holds s_k * cos(pi * (2n + 1) * k / (2N)).
std::vector<double> make_basis(int n) {
    std::vector<double> m(static_cast<size_t>(n) * n);
    const double s0 = std::sqrt(1.0 / n);
    const double sk = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            m[static_cast<size_t>(k) * n + i] =
                (k == 0 ? s0 : sk) * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    return m;
}

const std::vector<double>& basis(int n) {
    static const std::array<std::vector<double>, 5> tables = {
        make_basis(4), make_basis(8), make_basis(16), make_basis(32), make_basis(64)};
    int idx = 0;
    for (int s = n; s > 4; s >>= 1) ++idx;
    return tables[static_cast<size_t>(idx)];
}

void check_shape(size_t len, int w, int h) {
    if (!pow2_geq4(w) || !pow2_geq4(h) || w > 64 || h > 64)
        throw DataError("transform block dims must be powers of two in [4, 64]");
    if (len != static_cast<size_t>(w) * h)
        throw DataError("transform input length does not match block dims");
}

// out = basis * in, where in is rows x cols and basis is rows x rows.
std::vector<double> mul_basis_left(const std::vector<double>& b, std::span<const double> in,
                                   int rows, int cols, bool transpose_basis) {
    std::vector<double> out(static_cast<size_t>(rows) * cols, 0.0);
    for (int k = 0; k < rows; ++k) {
        for (int m = 0; m < rows; ++m) {
            const double w = transpose_basis ? b[static_cast<size_t>(m) * rows + k]
                                             : b[static_cast<size_t>(k) * rows + m];
            const double* src = &in[static_cast<size_t>(m) * cols];
            double* dst = &out[static_cast<size_t>(k) * cols];
            for (int c = 0; c < cols; ++c) dst[c] += w * src[c];
        }
    }
    return out;
}

// out = in * basis^T (or in * basis), where in is rows x cols.
std::vector<double> mul_basis_right(const std::vector<double>& b, std::span<const double> in,
                                    int rows, int cols, bool transpose_basis) {
    std::vector<double> out(static_cast<size_t>(rows) * cols, 0.0);
    for (int r = 0; r < rows; ++r) {
        const double* src = &in[static_cast<size_t>(r) * cols];
        double* dst = &out[static_cast<size_t>(r) * cols];
        for (int n = 0; n < cols; ++n) {
            const double v = src[n];
            if (v == 0.0) continue;
            for (int k = 0; k < cols; ++k) {
                const double w = transpose_basis ? b[static_cast<size_t>(n) * cols + k]
                                                 : b[static_cast<size_t>(k) * cols + n];
                dst[k] += v * w;
            }
        }
    }
    return out;
}

} // namespace

std::vector<double> forward_transform(std::span<const double> block, int w, int h) {
    check_shape(block.size(), w, h);
    // rows: X * Cw^T, then columns: Ch * (.)
    auto t = mul_basis_right(basis(w), block, h, w, /*transpose_basis=*/false);
    return mul_basis_left(basis(h), t, h, w, /*transpose_basis=*/false);
}

std::vector<double> inverse_transform(std::span<const double> coeffs, int w, int h) {
    check_shape(coeffs.size(), w, h);
    // columns: Ch^T * Y, then rows: (.) * Cw
    auto t = mul_basis_left(basis(h), coeffs, h, w, /*transpose_basis=*/true);
    return mul_basis_right(basis(w), t, h, w, /*transpose_basis=*/true);
}

std::vector<std::int64_t> quantize(std::span<const double> coeffs, double qstep, double theta) {
    if (!(qstep > 0))
        throw ConfigError("QStep must be positive");
    if (!(theta >= 0.0 && theta < 1.0))
        throw ConfigError("dead-zone offset must lie in [0, 1)");
    std::vector<std::int64_t> levels(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        const double c = coeffs[i];
        const auto mag = static_cast<std::int64_t>(std::floor(std::abs(c) / qstep + theta));
        levels[i] = c < 0 ? -mag : mag;
    }
    return levels;
}

std::vector<double> dequantize(std::span<const std::int64_t> levels, double qstep) {
    if (!(qstep > 0))
        throw ConfigError("QStep must be positive");
    std::vector<double> coeffs(levels.size());
    for (size_t i = 0; i < levels.size(); ++i)
        coeffs[i] = static_cast<double>(levels[i]) * qstep;
    return coeffs;
}

double SimResult::bits(Channel ch) const {
    double total = 0;
    for (const auto& cb : per_cb)
        total += ch == Channel::Y ? cb.bits_y : ch == Channel::Cb ? cb.bits_cb : cb.bits_cr;
    return total;
}

std::int64_t SimResult::pass_count(Channel ch) const {
    std::int64_t n = 0;
    for (const auto& cb : per_cb)
        n += (ch == Channel::Y ? cb.pass_y : ch == Channel::Cb ? cb.pass_cb : cb.pass_cr) ? 1 : 0;
    return n;
}

namespace {

struct BlockOutcome {
    double q_max = 0;
    std::int64_t nonzero = 0;
    double bits = 0;
};

BlockOutcome code_block(const Plane& orig, Plane& recon, const CodingBlock& block, double mu,
                        double qstep, int max_sample, double theta) {
    const auto samples = block_samples(orig, block);
    const double base = std::round(mu);

    std::vector<double> residual(samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        residual[i] = static_cast<double>(samples[i]) - base;

    const auto coeffs = forward_transform(residual, block.w, block.h);
    const auto levels = quantize(coeffs, qstep, theta);
    const auto rec_res = inverse_transform(dequantize(levels, qstep), block.w, block.h);

    BlockOutcome out;
    for (std::int64_t level : levels) {
        if (level != 0) {
            ++out.nonzero;
            out.bits += 1.0;  // sign bit
        }
        out.bits += std::log2(1.0 + static_cast<double>(std::llabs(level)));
    }

    const int vw = valid_width(orig, block);
    const int vh = valid_height(orig, block);
    for (int r = 0; r < vh; ++r) {
        for (int c = 0; c < vw; ++c) {
            const double value = base + rec_res[static_cast<size_t>(r) * block.w + c];
            const auto sample = static_cast<std::uint16_t>(
                std::clamp<long long>(std::llround(value), 0, max_sample));
            recon.at(block.x + c, block.y + r) = sample;
            const double err = std::abs(static_cast<double>(orig.at(block.x + c, block.y + r)) -
                                        static_cast<double>(sample));
            out.q_max = std::max(out.q_max, err);
        }
    }
    return out;
}

} // namespace

SimResult simulate_frame(const Frame& frame, const BlockGrid& grid, const QpMap& map,
                         int bit_depth, double theta) {
    if (static_cast<int>(map.entries.size()) != grid.block_count())
        throw DataError("QP map does not match the block grid");

    const int max_sample = (1 << bit_depth) - 1;
    SimResult result;
    result.recon.y = Plane(frame.y.width, frame.y.height);
    result.recon.cb = Plane(frame.cb.width, frame.cb.height);
    result.recon.cr = Plane(frame.cr.width, frame.cr.height);
    result.per_cb.reserve(map.entries.size());

    for (int i = 0; i < grid.block_count(); ++i) {
        const QpMapEntry& e = map.entries[static_cast<size_t>(i)];
        CbSimStats stats;
        stats.luma_index = e.luma_index;

        const BlockOutcome y = code_block(frame.y, result.recon.y, grid.luma_blocks[i], e.mu_y,
                                          e.pstep_y, max_sample, theta);
        const BlockOutcome cb = code_block(frame.cb, result.recon.cb, grid.cb_blocks[i], e.mu_cb,
                                           e.ostep_cb, max_sample, theta);
        const BlockOutcome cr = code_block(frame.cr, result.recon.cr, grid.cr_blocks[i], e.mu_cr,
                                           e.ostep_cr, max_sample, theta);

        stats.q_max_y = y.q_max;
        stats.q_max_cb = cb.q_max;
        stats.q_max_cr = cr.q_max;
        stats.nonzero_y = y.nonzero;
        stats.nonzero_cb = cb.nonzero;
        stats.nonzero_cr = cr.nonzero;
        stats.bits_y = y.bits;
        stats.bits_cb = cb.bits;
        stats.bits_cr = cr.bits;
        stats.pass_y = y.q_max <= e.l_y;
        stats.pass_cb = cb.q_max <= e.w_cb;
        stats.pass_cr = cr.q_max <= e.w_cr;
        result.per_cb.push_back(stats);
    }
    return result;
}

} // namespace pixelpaq
