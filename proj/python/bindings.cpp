#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pixelpaq/report.hpp"

namespace py = pybind11;
using namespace pixelpaq;

namespace {

using PlaneArray = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;

Plane plane_from_array(const PlaneArray& a) {
    if (a.ndim() != 2) throw ConfigError("plane array must be 2-D (height, width)");
    Plane p(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    const auto* src = a.data();
    std::copy(src, src + p.samples.size(), p.samples.begin());
    return p;
}

py::array_t<std::uint16_t> array_from_plane(const Plane& p) {
    return py::array_t<std::uint16_t>({p.height, p.width}, p.samples.data());
}

ChromaFormat infer_chroma(const Plane& y, const Plane& cb, const Plane& cr) {
    if (cb.width != cr.width || cb.height != cr.height)
        throw ConfigError("Cb and Cr planes must have identical dimensions");
    if (cb.width == y.width && cb.height == y.height) return ChromaFormat::C444;
    if (2 * cb.width == y.width && cb.height == y.height) return ChromaFormat::C422;
    if (2 * cb.width == y.width && 2 * cb.height == y.height) return ChromaFormat::C420;
    throw ConfigError("chroma plane dimensions match no supported sampling ratio");
}

struct FrameInput {
    Frame frame;
    VideoSpec spec;
};

FrameInput frame_from_arrays(const PlaneArray& y, const PlaneArray& cb, const PlaneArray& cr,
                             int bit_depth) {
    FrameInput in;
    in.frame.y = plane_from_array(y);
    in.frame.cb = plane_from_array(cb);
    in.frame.cr = plane_from_array(cr);
    in.spec.width = in.frame.y.width;
    in.spec.height = in.frame.y.height;
    in.spec.bit_depth = bit_depth;
    in.spec.chroma_format = infer_chroma(in.frame.y, in.frame.cb, in.frame.cr);
    in.spec.frame_count = 1;
    check_frame(in.frame, in.spec);
    return in;
}

std::vector<double> block_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                                     int& w, int& h) {
    if (a.ndim() != 2) throw ConfigError("block array must be 2-D");
    h = static_cast<int>(a.shape(0));
    w = static_cast<int>(a.shape(1));
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> array_from_block(const std::vector<double>& v, int w, int h) {
    return py::array_t<double>({h, w}, v.data());
}

py::dict entry_dict(const QpMapEntry& e) {
    py::dict d;
    d["index"] = e.luma_index;
    d["mu_y"] = e.mu_y;
    d["mu_cb"] = e.mu_cb;
    d["mu_cr"] = e.mu_cr;
    d["l_y"] = e.l_y;
    d["w_cb"] = e.w_cb;
    d["w_cr"] = e.w_cr;
    d["qp_y_base"] = e.qp_y_base;
    d["pqp_y"] = e.pqp_y;
    d["oqp_cb"] = e.oqp_cb;
    d["oqp_cr"] = e.oqp_cr;
    d["pstep_y"] = e.pstep_y;
    d["ostep_cb"] = e.ostep_cb;
    d["ostep_cr"] = e.ostep_cr;
    return d;
}

JndParams make_params(bool scale_chroma_knees) {
    JndParams p;
    p.scale_chroma_knees = scale_chroma_knees;
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "JND-based luma/chroma perceptual quantisation for YCbCr coding blocks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    py::class_<JndParams>(m, "JndParams")
        .def(py::init<>())
        .def_readwrite("a", &JndParams::a)
        .def_readwrite("c", &JndParams::c)
        .def_readwrite("d", &JndParams::d)
        .def_readwrite("f", &JndParams::f)
        .def_readwrite("g", &JndParams::g)
        .def_readwrite("h", &JndParams::h)
        .def_readwrite("j", &JndParams::j)
        .def_readwrite("k", &JndParams::k)
        .def_readwrite("scale_chroma_knees", &JndParams::scale_chroma_knees);

    py::class_<VideoSpec>(m, "VideoSpec")
        .def(py::init([](int width, int height, int bit_depth, const std::string& chroma,
                         std::int64_t frame_count) {
                 VideoSpec s{width, height, bit_depth, chroma_format_from_name(chroma), frame_count};
                 s.validate();
                 return s;
             }),
             py::arg("width"), py::arg("height"), py::arg("bit_depth") = 8,
             py::arg("chroma_format") = "420", py::arg("frame_count") = 1)
        .def_readonly("width", &VideoSpec::width)
        .def_readonly("height", &VideoSpec::height)
        .def_readonly("bit_depth", &VideoSpec::bit_depth)
        .def_readonly("frame_count", &VideoSpec::frame_count)
        .def_property_readonly("chroma_format",
                               [](const VideoSpec& s) { return chroma_format_name(s.chroma_format); })
        .def_property_readonly("max_sample", &VideoSpec::max_sample);

    m.def("frame_byte_size", &frame_byte_size, py::arg("spec"));
    m.def("sequence_byte_size", &sequence_byte_size, py::arg("spec"));

    m.def(
        "luma_weight",
        [](double mu, int bit_depth, const JndParams& p) { return luma_weight(mu, bit_depth, p); },
        py::arg("mu"), py::arg("bit_depth"), py::arg("params") = JndParams{});
    m.def(
        "chroma_weight",
        [](double mu, int bit_depth, const JndParams& p) { return chroma_weight(mu, bit_depth, p); },
        py::arg("mu"), py::arg("bit_depth"), py::arg("params") = JndParams{});
    m.def(
        "curve_table",
        [](int bit_depth, int n_points, const std::string& kind, const JndParams& p) {
            CurveKind ck;
            if (kind == "luma") ck = CurveKind::Luma;
            else if (kind == "chroma") ck = CurveKind::Chroma;
            else throw ConfigError("curve kind must be 'luma' or 'chroma'");
            return curve_table(bit_depth, n_points, ck, p);
        },
        py::arg("bit_depth"), py::arg("n_points"), py::arg("kind"),
        py::arg("params") = JndParams{});
    m.def(
        "block_mean",
        [](const PlaneArray& a) {
            return block_mean(std::span<const std::uint16_t>(a.data(), static_cast<size_t>(a.size())));
        },
        py::arg("samples"));

    m.def("qstep_from_qp", &qstep_from_qp, py::arg("qp"));
    m.def("qp_from_qstep", &qp_from_qstep, py::arg("qstep"));
    m.def(
        "perceptual_luma",
        [](int base_qp, double l_y, bool exact) {
            const LumaQp q = perceptual_luma(base_qp, l_y, exact);
            return py::make_tuple(q.pstep, q.pqp);
        },
        py::arg("base_qp"), py::arg("l_y"), py::arg("exact_weights") = false);
    m.def(
        "chroma_offset",
        [](int pqp_y, double w) {
            const ChromaQp q = chroma_offset(pqp_y, w);
            return py::make_tuple(q.oqp, q.ostep);
        },
        py::arg("pqp_y"), py::arg("w"));
    m.def(
        "perceptual_chroma",
        [](int base_qp, double w, bool exact) {
            const ChromaPQp q = perceptual_chroma(base_qp, w, exact);
            return py::make_tuple(q.pstep, q.pqp);
        },
        py::arg("base_qp"), py::arg("w"), py::arg("exact_weights") = false);

    m.def(
        "build_qp_map",
        [](const PlaneArray& y, const PlaneArray& cb, const PlaneArray& cr, int bit_depth,
           int cb_size, int base_qp, const std::string& mode, bool exact_weights,
           bool scale_chroma_knees) {
            const FrameInput in = frame_from_arrays(y, cb, cr, bit_depth);
            const BlockGrid grid = partition(in.spec, cb_size);
            const QpMap map = build_qp_map(in.frame, grid, base_qp, qp_mode_from_name(mode),
                                           bit_depth, make_params(scale_chroma_knees), exact_weights);
            py::list entries;
            for (const QpMapEntry& e : map.entries) entries.append(entry_dict(e));
            return entries;
        },
        py::arg("y"), py::arg("cb"), py::arg("cr"), py::arg("bit_depth"), py::arg("cb_size") = 64,
        py::arg("base_qp") = 22, py::arg("mode") = "pixel-paq", py::arg("exact_weights") = false,
        py::arg("scale_chroma_knees") = true);

    m.def(
        "simulate",
        [](const PlaneArray& y, const PlaneArray& cb, const PlaneArray& cr, int bit_depth,
           int cb_size, int base_qp, const std::string& mode, bool exact_weights,
           bool scale_chroma_knees, double theta) {
            const FrameInput in = frame_from_arrays(y, cb, cr, bit_depth);
            const BlockGrid grid = partition(in.spec, cb_size);
            const QpMap map = build_qp_map(in.frame, grid, base_qp, qp_mode_from_name(mode),
                                           bit_depth, make_params(scale_chroma_knees), exact_weights);
            const SimResult sim = simulate_frame(in.frame, grid, map, bit_depth, theta);
            py::dict out;
            out["recon_y"] = array_from_plane(sim.recon.y);
            out["recon_cb"] = array_from_plane(sim.recon.cb);
            out["recon_cr"] = array_from_plane(sim.recon.cr);
            out["bits_y"] = sim.bits(Channel::Y);
            out["bits_cb"] = sim.bits(Channel::Cb);
            out["bits_cr"] = sim.bits(Channel::Cr);
            out["pass_y"] = sim.pass_count(Channel::Y);
            out["pass_cb"] = sim.pass_count(Channel::Cb);
            out["pass_cr"] = sim.pass_count(Channel::Cr);
            out["blocks"] = grid.block_count();
            py::list per_cb;
            for (const CbSimStats& s : sim.per_cb) {
                py::dict d;
                d["index"] = s.luma_index;
                d["q_max_y"] = s.q_max_y;
                d["q_max_cb"] = s.q_max_cb;
                d["q_max_cr"] = s.q_max_cr;
                d["nonzero_y"] = s.nonzero_y;
                d["nonzero_cb"] = s.nonzero_cb;
                d["nonzero_cr"] = s.nonzero_cr;
                d["bits_y"] = s.bits_y;
                d["bits_cb"] = s.bits_cb;
                d["bits_cr"] = s.bits_cr;
                d["pass_y"] = s.pass_y;
                d["pass_cb"] = s.pass_cb;
                d["pass_cr"] = s.pass_cr;
                per_cb.append(d);
            }
            out["per_cb"] = per_cb;
            return out;
        },
        py::arg("y"), py::arg("cb"), py::arg("cr"), py::arg("bit_depth"), py::arg("cb_size") = 64,
        py::arg("base_qp") = 22, py::arg("mode") = "pixel-paq", py::arg("exact_weights") = false,
        py::arg("scale_chroma_knees") = true, py::arg("theta") = kDefaultDeadzoneTheta);

    m.def(
        "forward_transform",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            int w, h;
            const auto block = block_from_array(a, w, h);
            return array_from_block(forward_transform(block, w, h), w, h);
        },
        py::arg("block"));
    m.def(
        "inverse_transform",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            int w, h;
            const auto coeffs = block_from_array(a, w, h);
            return array_from_block(inverse_transform(coeffs, w, h), w, h);
        },
        py::arg("coefficients"));
    m.def(
        "quantize",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double qstep,
           double theta) {
            const std::vector<double> c(a.data(), a.data() + a.size());
            const auto levels = quantize(c, qstep, theta);
            return py::array_t<std::int64_t>({static_cast<py::ssize_t>(levels.size())},
                                             levels.data());
        },
        py::arg("coefficients"), py::arg("qstep"), py::arg("theta") = kDefaultDeadzoneTheta);
    m.def(
        "dequantize",
        [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& a,
           double qstep) {
            const std::vector<std::int64_t> levels(a.data(), a.data() + a.size());
            const auto coeffs = dequantize(levels, qstep);
            return py::array_t<double>({static_cast<py::ssize_t>(coeffs.size())}, coeffs.data());
        },
        py::arg("levels"), py::arg("qstep"));

    m.def(
        "psnr",
        [](const PlaneArray& a, const PlaneArray& b, int bit_depth) {
            return psnr(plane_from_array(a), plane_from_array(b), bit_depth);
        },
        py::arg("orig"), py::arg("recon"), py::arg("bit_depth"));
    m.def(
        "ssim",
        [](const PlaneArray& a, const PlaneArray& b, int bit_depth, bool return_map) -> py::object {
            const SsimResult r = ssim(plane_from_array(a), plane_from_array(b), bit_depth, return_map);
            if (!return_map) return py::float_(r.mean);
            py::array_t<double> map({r.map_height, r.map_width}, r.map.data());
            return py::make_tuple(r.mean, map);
        },
        py::arg("orig"), py::arg("recon"), py::arg("bit_depth"), py::arg("return_map") = false);

    m.def(
        "read_frame",
        [](const std::string& path, const VideoSpec& spec, std::int64_t index) {
            FrameReader reader(path, spec);
            const Frame f = reader.read_frame(index);
            return py::make_tuple(array_from_plane(f.y), array_from_plane(f.cb),
                                  array_from_plane(f.cr));
        },
        py::arg("path"), py::arg("spec"), py::arg("index") = 0);
    m.def(
        "write_sequence",
        [](const std::string& path, const VideoSpec& spec,
           const std::vector<std::tuple<PlaneArray, PlaneArray, PlaneArray>>& frames) {
            if (static_cast<std::int64_t>(frames.size()) != spec.frame_count)
                throw ConfigError("frame list length does not match spec.frame_count");
            FrameWriter writer(path, spec);
            for (const auto& [y, cb, cr] : frames) {
                Frame f;
                f.y = plane_from_array(y);
                f.cb = plane_from_array(cb);
                f.cr = plane_from_array(cr);
                writer.write_frame(f);
            }
        },
        py::arg("path"), py::arg("spec"), py::arg("frames"));

#ifdef PIXELPAQ_VERSION
    m.attr("__version__") = PIXELPAQ_VERSION;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
