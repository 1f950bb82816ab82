#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kerlab/report.hpp"

namespace py = pybind11;
using namespace kerlab;

namespace {

OrthonormalBasis single_factor_onb(const Domain& d, int degree, MeasureTag tag,
                                   const std::function<double(cd)>& weight, int nodes) {
    BasisSpec basis = BasisSpec::tensor({FactorBasis::for_domain(d, degree)});
    GramMatrix g;
    if (tag == MeasureTag::Area) {
        const int radial = std::max(nodes / 8, degree + 8);
        const int angular = std::max(nodes, (d.is_annulus() ? 4 : 2) * degree + 16);
        g = assemble_gram_tensor(basis, tag,
                                 {{1.0, {gram_1d(basis.factors[0], {area_rule(d, radial, angular), weight})}}});
    } else {
        const int n = std::max(nodes, (d.is_annulus() ? 4 : 2) * degree + 16);
        g = assemble_gram_tensor(basis, tag,
                                 {{1.0 / kTwoPi, {gram_1d(basis.factors[0], {boundary_rule(d, n), weight})}}});
    }
    return orthonormalize(g);
}

HarmonicField field_from_parts(const std::vector<cd>& poly, double log_coeff,
                               const std::vector<std::pair<double, cd>>& green_terms) {
    HarmonicField h;
    h.poly_coeffs = poly;
    h.log_coeff = log_coeff;
    h.green_terms = green_terms;
    return h;
}

}  // namespace

PYBIND11_MODULE(_kerlab, m) {
    m.doc() = "weighted Bergman / boundary kernel laboratory on planar domains";

    py::class_<Domain>(m, "Domain")
        .def_static("disc", &Domain::disc, py::arg("center"), py::arg("radius"))
        .def_static("annulus", &Domain::annulus, py::arg("center"), py::arg("r_inner"), py::arg("r_outer"))
        .def_property_readonly("is_annulus", &Domain::is_annulus)
        .def_property_readonly("center", &Domain::center)
        .def_property_readonly("outer_radius", &Domain::outer_radius)
        .def_property_readonly("inner_radius", &Domain::inner_radius)
        .def("area", &Domain::area)
        .def("boundary_length", &Domain::boundary_length)
        .def("contains", &Domain::contains, py::arg("z"), py::arg("pad") = 0.0)
        .def("green", &Domain::green, py::arg("z"), py::arg("t"))
        .def("green_normal", py::overload_cast<cd, cd>(&Domain::green_normal, py::const_),
             py::arg("boundary_z"), py::arg("t"))
        .def("harmonic_measure_inner", &Domain::harmonic_measure_inner, py::arg("t"));

    m.def(
        "harmonic_flux",
        [](const Domain& d, const std::vector<cd>& poly, double log_coeff,
           const std::vector<std::pair<double, cd>>& green_terms, int component) {
            return harmonic_flux(d, field_from_parts(poly, log_coeff, green_terms), component);
        },
        py::arg("domain"), py::arg("poly_coeffs") = std::vector<cd>{}, py::arg("log_coeff") = 0.0,
        py::arg("green_terms") = std::vector<std::pair<double, cd>>{}, py::arg("component") = 0,
        "Period of the conjugate harmonic function around one boundary component.");

    m.def(
        "bergman_kernel",
        [](const Domain& d, cd z, cd w, int degree) {
            const OrthonormalBasis onb =
                single_factor_onb(d, degree, MeasureTag::Area, [](cd) { return 1.0; }, 64);
            const cd zs[1] = {z}, ws[1] = {w};
            return kernel_eval(onb, std::span<const cd>(zs, 1), std::span<const cd>(ws, 1));
        },
        py::arg("domain"), py::arg("z"), py::arg("w"), py::arg("degree") = 24);

    m.def(
        "szego_kernel",
        [](const Domain& d, cd z, cd w, int degree, int nodes) {
            const OrthonormalBasis onb =
                single_factor_onb(d, degree, MeasureTag::Boundary, [](cd) { return 1.0; }, nodes);
            const cd zs[1] = {z}, ws[1] = {w};
            return kernel_eval(onb, std::span<const cd>(zs, 1), std::span<const cd>(ws, 1));
        },
        py::arg("domain"), py::arg("z"), py::arg("w"), py::arg("degree") = 24, py::arg("nodes") = 256);

    m.def(
        "conjugate_hardy",
        [](const Domain& d, cd z0, int degree, int nodes) {
            const OrthonormalBasis onb = single_factor_onb(
                d, degree, MeasureTag::Boundary, [d, z0](cd z) { return 1.0 / d.green_normal(z, z0); }, nodes);
            const cd zs[1] = {z0};
            return std::real(kernel_eval(onb, std::span<const cd>(zs, 1), std::span<const cd>(zs, 1)));
        },
        py::arg("domain"), py::arg("z0"), py::arg("degree") = 32, py::arg("nodes") = 512,
        "Conjugate Hardy kernel value at z0 (boundary weight (dG/dnu)^{-1} with pole z0).");

    m.def(
        "run_json",
        [](const std::string& config_text) -> py::tuple {
            RunConfig cfg;
            try {
                cfg = parse_run_config_text(config_text);
            } catch (const std::exception& e) {
                return py::make_tuple(2, std::string(), std::string(e.what()));
            }
            const RunOutcome out = run_config(cfg);
            return py::make_tuple(out.exit_code, out.report.dump(2), out.error);
        },
        py::arg("config_json"),
        "Run a full config document; returns (exit_code, report_json, error).");

    m.attr("__version__") = "0.1.0";
}
