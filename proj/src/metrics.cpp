#include "pixelpaq/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>

namespace pixelpaq {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

void check_dims(const Plane& a, const Plane& b) {
    if (a.width != b.width || a.height != b.height)
        throw DataError("plane dimensions do not match");
}

const std::array<double, kWindow>& gaussian_kernel() {
    static const std::array<double, kWindow> kernel = [] {
        std::array<double, kWindow> k{};
        double sum = 0;
        for (int i = 0; i < kWindow; ++i) {
            const double d = i - (kWindow - 1) / 2.0;
            k[static_cast<size_t>(i)] = std::exp(-d * d / (2.0 * kSigma * kSigma));
            sum += k[static_cast<size_t>(i)];
        }
        for (double& v : k) v /= sum;
        return k;
    }();
    return kernel;
}

// Valid-mode separable convolution with the normalised 1-D Gaussian:
// horizontal pass shrinks width by kWindow-1, vertical pass shrinks height.
std::vector<double> blur(const std::vector<double>& in, int w, int h) {
    const auto& g = gaussian_kernel();
    const int ow = w - kWindow + 1;
    std::vector<double> t(static_cast<size_t>(ow) * h);
    for (int r = 0; r < h; ++r) {
        const double* src = &in[static_cast<size_t>(r) * w];
        double* dst = &t[static_cast<size_t>(r) * ow];
        for (int c = 0; c < ow; ++c) {
            double acc = 0;
            for (int i = 0; i < kWindow; ++i) acc += g[static_cast<size_t>(i)] * src[c + i];
            dst[c] = acc;
        }
    }
    const int oh = h - kWindow + 1;
    std::vector<double> out(static_cast<size_t>(ow) * oh);
    for (int r = 0; r < oh; ++r) {
        double* dst = &out[static_cast<size_t>(r) * ow];
        for (int c = 0; c < ow; ++c) {
            double acc = 0;
            for (int i = 0; i < kWindow; ++i) acc += g[static_cast<size_t>(i)] * t[static_cast<size_t>(r + i) * ow + c];
            dst[c] = acc;
        }
    }
    return out;
}

} // namespace

double mse(const Plane& a, const Plane& b) {
    check_dims(a, b);
    double sum = 0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        const double d = static_cast<double>(a.samples[i]) - static_cast<double>(b.samples[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.samples.size());
}

double psnr(const Plane& orig, const Plane& recon, int bit_depth) {
    check_dims(orig, recon);
    const double err = mse(orig, recon);
    if (err == 0.0)
        return std::numeric_limits<double>::infinity();
    const double peak = static_cast<double>((1 << bit_depth) - 1);
    return 10.0 * std::log10(peak * peak / err);
}

SsimResult ssim(const Plane& orig, const Plane& recon, int bit_depth, bool want_map) {
    check_dims(orig, recon);
    const int w = orig.width;
    const int h = orig.height;
    if (w < kWindow || h < kWindow)
        throw DataError("plane smaller than the SSIM window");

    const size_t n = static_cast<size_t>(w) * h;
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (size_t i = 0; i < n; ++i) {
        const double a = orig.samples[i];
        const double b = recon.samples[i];
        x[i] = a;
        y[i] = b;
        xx[i] = a * a;
        yy[i] = b * b;
        xy[i] = a * b;
    }

    const auto mx = blur(x, w, h);
    const auto my = blur(y, w, h);
    const auto mxx = blur(xx, w, h);
    const auto myy = blur(yy, w, h);
    const auto mxy = blur(xy, w, h);

    const double peak = static_cast<double>((1 << bit_depth) - 1);
    const double c1 = (kK1 * peak) * (kK1 * peak);
    const double c2 = (kK2 * peak) * (kK2 * peak);

    SsimResult result;
    result.map_width = w - kWindow + 1;
    result.map_height = h - kWindow + 1;
    if (want_map) result.map.resize(mx.size());

    double sum = 0;
    for (size_t i = 0; i < mx.size(); ++i) {
        const double ux = mx[i];
        const double uy = my[i];
        const double vx = mxx[i] - ux * ux;
        const double vy = myy[i] - uy * uy;
        const double cov = mxy[i] - ux * uy;
        const double value = ((2.0 * ux * uy + c1) * (2.0 * cov + c2)) /
                             ((ux * ux + uy * uy + c1) * (vx + vy + c2));
        sum += value;
        if (want_map) result.map[i] = value;
    }
    result.mean = sum / static_cast<double>(mx.size());
    return result;
}

MetricsReport report(const Frame& orig, const Frame& recon, int bit_depth, bool want_maps) {
    MetricsReport m;
    m.psnr_y = psnr(orig.y, recon.y, bit_depth);
    m.psnr_cb = psnr(orig.cb, recon.cb, bit_depth);
    m.psnr_cr = psnr(orig.cr, recon.cr, bit_depth);
    auto sy = ssim(orig.y, recon.y, bit_depth, want_maps);
    auto scb = ssim(orig.cb, recon.cb, bit_depth, want_maps);
    auto scr = ssim(orig.cr, recon.cr, bit_depth, want_maps);
    m.ssim_y = sy.mean;
    m.ssim_cb = scb.mean;
    m.ssim_cr = scr.mean;
    if (want_maps) {
        m.ssim_maps.push_back(std::move(sy));
        m.ssim_maps.push_back(std::move(scb));
        m.ssim_maps.push_back(std::move(scr));
    }
    return m;
}

void write_pgm(const std::filesystem::path& path, const SsimResult& map) {
    if (map.map.size() != static_cast<size_t>(map.map_width) * map.map_height)
        throw DataError("SSIM map size does not match its dims");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P5\n" << map.map_width << " " << map.map_height << "\n255\n";
    std::vector<std::uint8_t> row(map.map.size());
    for (size_t i = 0; i < map.map.size(); ++i) {
        const double v = std::clamp(map.map[i], 0.0, 1.0);
        row[i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!out) throw IoError("write failed on " + path.string());
}

} // namespace pixelpaq
