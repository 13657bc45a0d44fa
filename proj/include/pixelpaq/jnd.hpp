#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pixelpaq/block_model.hpp"

namespace pixelpaq {

// Parameters of the luma and chroma JND weight curves. The luma curve is a
// two-branch parabola in mu/2^b; the chroma curve is piecewise linear with a
// flat unity region between the knees h and j.
struct JndParams {
    double a = 2.0;
    double c = 0.8;
    double d = 3.0;
    double f = 2.0;
    double g = 3.0;
    double h = 85.0;
    double j = 90.0;
    double k = 3.0;
    // The knees h and j are calibrated on 8-bit data; when true they scale by
    // 2^(b-8) so the flat region keeps its relative position at any bit depth.
    bool scale_chroma_knees = true;

    void validate(int bit_depth) const;  // throws ConfigError
};

// Arithmetic mean, no intermediate rounding. Throws DataError on empty input.
double block_mean(std::span<const std::uint16_t> samples);

// Luma JND weight at mean mu for the given bit depth. Range [1, a+1].
double luma_weight(double mu, int bit_depth, const JndParams& params = {});

// Chroma JND weight at mean mu; the same curve serves Cb and Cr.
// Range [1, max(g, k)].
double chroma_weight(double mu, int bit_depth, const JndParams& params = {});

enum class CurveKind { Luma, Chroma };

// n_points evenly spaced (mu, weight) pairs over [0, 2^b - 1], for plotting.
std::vector<std::pair<double, double>> curve_table(int bit_depth, int n_points, CurveKind kind,
                                                   const JndParams& params = {});

// Per-CB means and JND weights for the co-located Y/Cb/Cr block triple.
// Means are taken over valid samples only (edge blocks are not padded here).
struct JndWeights {
    double mu_y = 0;
    double mu_cb = 0;
    double mu_cr = 0;
    double l_y = 1;
    double w_cb = 1;
    double w_cr = 1;
};

JndWeights block_weights(const Frame& frame, const BlockGrid& grid, int luma_index, int bit_depth,
                         const JndParams& params = {});

} // namespace pixelpaq
