#pragma once

#include <filesystem>
#include <vector>

#include "pixelpaq/yuv_io.hpp"

namespace pixelpaq {

// Mean squared error between two planes of identical dimensions.
double mse(const Plane& a, const Plane& b);

// 10*log10(max^2 / MSE); returns +infinity when the planes are identical.
double psnr(const Plane& orig, const Plane& recon, int bit_depth);

// SSIM mean plus the per-window index map (one value per valid 11x11 window
// centre, so the map is (w-10) x (h-10)).
struct SsimResult {
    double mean = 1.0;
    int map_width = 0;
    int map_height = 0;
    std::vector<double> map;
};

// Standard SSIM: 11x11 Gaussian window sigma 1.5, K1 = 0.01, K2 = 0.03,
// dynamic range 2^b - 1. Throws DataError on dim mismatch or planes < 11.
SsimResult ssim(const Plane& orig, const Plane& recon, int bit_depth, bool want_map = true);

struct MetricsReport {
    double psnr_y = 0, psnr_cb = 0, psnr_cr = 0;
    double ssim_y = 1, ssim_cb = 1, ssim_cr = 1;
    std::vector<SsimResult> ssim_maps;  // Y, Cb, Cr when requested, else empty
};

MetricsReport report(const Frame& orig, const Frame& recon, int bit_depth, bool want_maps = false);

// 8-bit greyscale PGM of an SSIM map, value = round(255 * clamp(ssim, 0, 1)).
void write_pgm(const std::filesystem::path& path, const SsimResult& map);

} // namespace pixelpaq
