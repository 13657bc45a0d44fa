#pragma once

#include <string>
#include <vector>

#include "pixelpaq/jnd.hpp"

namespace pixelpaq {

inline constexpr int kMinQp = 0;
inline constexpr int kMaxQp = 51;

// QStep = 2^((QP - 4) / 6). Throws ConfigError outside [0, 51].
double qstep_from_qp(int qp);

// QP = ceil(6 * log2(QStep)) + 4, with a 1e-9 guard so exact powers round-trip.
// Result is not clipped. Throws ConfigError for qstep <= 0.
int qp_from_qstep(double qstep);

// Nearest integer, halves away from zero-at-positive (floor(x + 0.5)).
int round_half_up(double x);

struct LumaQp {
    double pstep = 0;  // perceptual luma QStep
    int pqp = 0;       // perceptual luma QP, clipped to [0, 51]
};

// Weighs the base QStep with ceil(l_y) (or l_y itself when exact_weights).
LumaQp perceptual_luma(int base_qp, double l_y, bool exact_weights = false);

struct ChromaQp {
    int oqp = 0;       // offset chroma QP, clipped to [0, 51]
    double ostep = 0;  // QStep of oqp
};

// CB-level chroma QP offset against the perceptual luma QP:
// oqp = pqp_y + round_half_up(3 * w). Serves both Cb and Cr.
ChromaQp chroma_offset(int pqp_y, double w);

struct ChromaPQp {
    double pstep = 0;
    int pqp = 0;
};

// Standalone perceptual chroma QP (base QStep weighed with the rounded chroma
// weight). The end-to-end pipeline signals chroma through chroma_offset; this
// exists for per-channel analysis.
ChromaPQp perceptual_chroma(int base_qp, double w, bool exact_weights = false);

enum class QpMode { PixelPaq, Idsq, Uniform };

const char* qp_mode_name(QpMode mode);          // "pixel-paq" / "idsq" / "uniform"
QpMode qp_mode_from_name(const std::string&);   // throws ConfigError

// Per-CB record of means, weights and derived QPs/QSteps.
struct QpMapEntry {
    int luma_index = 0;
    double mu_y = 0, mu_cb = 0, mu_cr = 0;
    double l_y = 1, w_cb = 1, w_cr = 1;
    int qp_y_base = 0;
    int pqp_y = 0;
    int oqp_cb = 0, oqp_cr = 0;
    double pstep_y = 0;
    double ostep_cb = 0, ostep_cr = 0;
};

struct QpMap {
    QpMode mode = QpMode::PixelPaq;
    int base_qp = 0;
    std::vector<QpMapEntry> entries;  // one per luma CB, in grid order
};

// Derives the per-CB QP map for one frame.
//   PixelPaq: perceptual luma QP plus JND-weighted chroma QP offsets.
//   Idsq:     perceptual luma QP; chroma inherits it with zero offset.
//   Uniform:  every QP equals base_qp.
// Means and weights are recorded in all modes.
QpMap build_qp_map(const Frame& frame, const BlockGrid& grid, int base_qp, QpMode mode,
                   int bit_depth, const JndParams& params = {}, bool exact_weights = false);

} // namespace pixelpaq
