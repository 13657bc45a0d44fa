#include "pixelpaq/jnd.hpp"

#include <cmath>

namespace pixelpaq {

void JndParams::validate(int bit_depth) const {
    if (a <= 0 || c <= 0)
        throw ConfigError("luma curve parameters a and c must be positive");
    if (g < 1 || k < 1)
        throw ConfigError("chroma curve parameters g and k must be >= 1");
    const double scale = scale_chroma_knees ? std::exp2(bit_depth - 8) : 1.0;
    const double hp = h * scale;
    const double jp = j * scale;
    const double max = std::exp2(bit_depth) - 1;
    if (!(0 < hp && hp < jp && jp < max))
        throw ConfigError("chroma knees must satisfy 0 < h < j < 2^b - 1 after scaling");
}

double block_mean(std::span<const std::uint16_t> samples) {
    if (samples.empty())
        throw DataError("cannot take the mean of an empty block");
    double sum = 0;
    for (std::uint16_t s : samples) sum += s;
    return sum / static_cast<double>(samples.size());
}

double luma_weight(double mu, int bit_depth, const JndParams& p) {
    const double full = std::exp2(bit_depth);
    if (mu < 0 || mu > full - 1)
        throw ConfigError("luma mean outside sample range");
    const double r = 2.0 * mu / full;
    if (mu <= full / 2)
        return p.a * std::pow(1.0 - r, p.d) + 1.0;
    return p.c * std::pow(r - 1.0, p.f) + 1.0;
}

double chroma_weight(double mu, int bit_depth, const JndParams& p) {
    p.validate(bit_depth);
    const double max = std::exp2(bit_depth) - 1;
    if (mu < 0 || mu > max)
        throw ConfigError("chroma mean outside sample range");
    const double scale = p.scale_chroma_knees ? std::exp2(bit_depth - 8) : 1.0;
    const double hp = p.h * scale;
    const double jp = p.j * scale;
    if (mu <= hp)
        return p.g - (p.g - 1.0) * mu / hp;
    if (mu < jp)
        return 1.0;
    return 1.0 + (p.k - 1.0) * (mu - jp) / (max - jp);
}

std::vector<std::pair<double, double>> curve_table(int bit_depth, int n_points, CurveKind kind,
                                                   const JndParams& params) {
    if (n_points < 2)
        throw ConfigError("curve table needs at least 2 points");
    const double max = std::exp2(bit_depth) - 1;
    std::vector<std::pair<double, double>> table;
    table.reserve(static_cast<size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double mu = max * static_cast<double>(i) / (n_points - 1);
        const double w = kind == CurveKind::Luma ? luma_weight(mu, bit_depth, params)
                                                 : chroma_weight(mu, bit_depth, params);
        table.emplace_back(mu, w);
    }
    return table;
}

JndWeights block_weights(const Frame& frame, const BlockGrid& grid, int luma_index, int bit_depth,
                         const JndParams& params) {
    if (luma_index < 0 || luma_index >= grid.block_count())
        throw ConfigError("luma block index outside grid");
    JndWeights w;
    w.mu_y = block_mean(valid_samples(frame.y, grid.luma_blocks[luma_index]));
    w.mu_cb = block_mean(valid_samples(frame.cb, grid.cb_blocks[luma_index]));
    w.mu_cr = block_mean(valid_samples(frame.cr, grid.cr_blocks[luma_index]));
    w.l_y = luma_weight(w.mu_y, bit_depth, params);
    w.w_cb = chroma_weight(w.mu_cb, bit_depth, params);
    w.w_cr = chroma_weight(w.mu_cr, bit_depth, params);
    return w;
}

} // namespace pixelpaq
