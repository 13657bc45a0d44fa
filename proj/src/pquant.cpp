#include "pixelpaq/pquant.hpp"

#include <algorithm>
#include <cmath>

namespace pixelpaq {

namespace {

// Guard so 6*log2 of an exact power of two lands on the integer.
constexpr double kCeilGuard = 1e-9;

int clip_qp(int qp) {
    return std::clamp(qp, kMinQp, kMaxQp);
}

} // namespace

double qstep_from_qp(int qp) {
    if (qp < kMinQp || qp > kMaxQp)
        throw ConfigError("QP " + std::to_string(qp) + " outside [0, 51]");
    return std::exp2((qp - 4) / 6.0);
}

int qp_from_qstep(double qstep) {
    if (!(qstep > 0))
        throw ConfigError("QStep must be positive");
    return static_cast<int>(std::ceil(6.0 * std::log2(qstep) - kCeilGuard)) + 4;
}

int round_half_up(double x) {
    return static_cast<int>(std::floor(x + 0.5));
}

LumaQp perceptual_luma(int base_qp, double l_y, bool exact_weights) {
    if (l_y < 1.0)
        throw ConfigError("luma JND weight must be >= 1");
    const double weight = exact_weights ? l_y : std::ceil(l_y);
    LumaQp out;
    out.pstep = qstep_from_qp(base_qp) * weight;
    out.pqp = clip_qp(qp_from_qstep(out.pstep));
    return out;
}

ChromaQp chroma_offset(int pqp_y, double w) {
    if (pqp_y < kMinQp || pqp_y > kMaxQp)
        throw ConfigError("perceptual luma QP outside [0, 51]");
    if (w < 1.0)
        throw ConfigError("chroma JND weight must be >= 1");
    ChromaQp out;
    out.oqp = clip_qp(pqp_y + round_half_up(3.0 * w));
    out.ostep = std::exp2((out.oqp - 4) / 6.0);
    return out;
}

ChromaPQp perceptual_chroma(int base_qp, double w, bool exact_weights) {
    if (w < 1.0)
        throw ConfigError("chroma JND weight must be >= 1");
    const double weight = exact_weights ? w : static_cast<double>(round_half_up(w));
    ChromaPQp out;
    out.pstep = qstep_from_qp(base_qp) * weight;
    out.pqp = clip_qp(qp_from_qstep(out.pstep));
    return out;
}

const char* qp_mode_name(QpMode mode) {
    switch (mode) {
    case QpMode::PixelPaq: return "pixel-paq";
    case QpMode::Idsq: return "idsq";
    case QpMode::Uniform: return "uniform";
    }
    return "?";
}

QpMode qp_mode_from_name(const std::string& name) {
    if (name == "pixel-paq") return QpMode::PixelPaq;
    if (name == "idsq") return QpMode::Idsq;
    if (name == "uniform") return QpMode::Uniform;
    throw ConfigError("unknown mode '" + name + "' (expected pixel-paq, idsq or uniform)");
}

QpMap build_qp_map(const Frame& frame, const BlockGrid& grid, int base_qp, QpMode mode,
                   int bit_depth, const JndParams& params, bool exact_weights) {
    if (base_qp < kMinQp || base_qp > kMaxQp)
        throw ConfigError("base QP outside [0, 51]");

    QpMap map;
    map.mode = mode;
    map.base_qp = base_qp;
    map.entries.reserve(static_cast<size_t>(grid.block_count()));

    const double base_step = qstep_from_qp(base_qp);
    for (int i = 0; i < grid.block_count(); ++i) {
        const JndWeights w = block_weights(frame, grid, i, bit_depth, params);
        QpMapEntry e;
        e.luma_index = i;
        e.mu_y = w.mu_y;
        e.mu_cb = w.mu_cb;
        e.mu_cr = w.mu_cr;
        e.l_y = w.l_y;
        e.w_cb = w.w_cb;
        e.w_cr = w.w_cr;
        e.qp_y_base = base_qp;
        switch (mode) {
        case QpMode::PixelPaq: {
            const LumaQp luma = perceptual_luma(base_qp, w.l_y, exact_weights);
            e.pqp_y = luma.pqp;
            e.pstep_y = luma.pstep;
            const ChromaQp cb = chroma_offset(luma.pqp, w.w_cb);
            const ChromaQp cr = chroma_offset(luma.pqp, w.w_cr);
            e.oqp_cb = cb.oqp;
            e.ostep_cb = cb.ostep;
            e.oqp_cr = cr.oqp;
            e.ostep_cr = cr.ostep;
            break;
        }
        case QpMode::Idsq: {
            const LumaQp luma = perceptual_luma(base_qp, w.l_y, exact_weights);
            e.pqp_y = luma.pqp;
            e.pstep_y = luma.pstep;
            e.oqp_cb = e.oqp_cr = luma.pqp;
            e.ostep_cb = e.ostep_cr = qstep_from_qp(luma.pqp);
            break;
        }
        case QpMode::Uniform:
            e.pqp_y = base_qp;
            e.pstep_y = base_step;
            e.oqp_cb = e.oqp_cr = base_qp;
            e.ostep_cb = e.ostep_cr = base_step;
            break;
        }
        map.entries.push_back(e);
    }
    return map;
}

} // namespace pixelpaq
