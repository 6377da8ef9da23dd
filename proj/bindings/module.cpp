#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "warpineq/audit.hpp"
#include "warpineq/checks.hpp"
#include "warpineq/eigen.hpp"
#include "warpineq/errors.hpp"
#include "warpineq/geometry.hpp"
#include "warpineq/harmonic.hpp"
#include "warpineq/matrix.hpp"
#include "warpineq/report.hpp"
#include "warpineq/rng.hpp"
#include "warpineq/spectra.hpp"

namespace py = pybind11;
using namespace warpineq;

namespace {

Matrix matrix_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) {
        throw std::invalid_argument("Matrix expects a 2-D array");
    }
    auto rows = static_cast<std::size_t>(arr.shape(0));
    auto cols = static_cast<std::size_t>(arr.shape(1));
    std::vector<double> entries(arr.data(), arr.data() + rows * cols);
    return Matrix(rows, cols, std::move(entries));
}

py::array_t<double> matrix_to_array(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
    return py::array_t<double>({static_cast<py::ssize_t>(v.size())}, v.data());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical audits of warped-product curvature inequalities and the "
              "singular-value / harmonic-series bounds behind them";
    m.attr("TOOL_VERSION") = kToolVersion;

    py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Matrix>(m, "Matrix")
        .def(py::init(&matrix_from_array), py::arg("array"))
        .def_property_readonly("rows", &Matrix::rows)
        .def_property_readonly("cols", &Matrix::cols)
        .def("numpy", &matrix_to_array)
        .def("__repr__", [](const Matrix& a) {
            std::ostringstream os;
            os << "Matrix(" << a.rows() << "x" << a.cols() << ")";
            return os.str();
        });
    py::implicitly_convertible<py::array, Matrix>();

    // matrix text format
    m.def("load_matrix_text", &load_matrix_text, py::arg("path"));
    m.def("save_matrix_text", &save_matrix_text, py::arg("path"), py::arg("matrix"));
    m.def("is_doubly_stochastic", &is_doubly_stochastic, py::arg("matrix"), py::arg("tol"));

    // norms and spectra
    m.def("hs_norm", &hs_norm, py::arg("matrix"));
    m.def("spectral_norm", &spectral_norm, py::arg("matrix"));
    m.def("schatten_sum_norm", &schatten_sum_norm, py::arg("matrix"), py::arg("p"));
    m.def("kyfan_norm", &kyfan_norm, py::arg("matrix"), py::arg("k"));
    m.def(
        "singular_values",
        [](const Matrix& a) { return vector_to_array(singular_values(a).singular_values); },
        py::arg("matrix"));
    m.def(
        "symmetric_eigen",
        [](const Matrix& a) {
            SymmetricEigen eig = symmetric_eigen(a);
            return py::make_tuple(vector_to_array(eig.values), matrix_to_array(eig.vectors));
        },
        py::arg("matrix"), "Returns (values_decreasing, eigenvector_columns)");
    m.def("inverse_sqrt_pd", &inverse_sqrt_pd, py::arg("matrix"));
    m.def("matrix_power", &matrix_power, py::arg("matrix"), py::arg("k"));
    m.def(
        "psd_order",
        [](const Matrix& a, const Matrix& b, double tol) {
            PsdOrderWitness w = psd_order(a, b, tol);
            return py::make_tuple(w.holds, w.lhs_minus_rhs_min_eigenvalue);
        },
        py::arg("a"), py::arg("b"), py::arg("tol") = 1e-9,
        "Whether a - b is positive semidefinite; returns (holds, min_eigenvalue)");

    // seeded generators
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("dim"), py::arg("trial") = 0,
          py::arg("salt") = 0);
    m.def("gen_orthogonal", &gen::gen_orthogonal, py::arg("dim"), py::arg("seed"));
    m.def("gen_symmetric", &gen::gen_symmetric, py::arg("dim"), py::arg("seed"));
    m.def("gen_positive_definite", &gen::gen_positive_definite, py::arg("dim"), py::arg("seed"));
    m.def("gen_pd_hs_contraction", &gen::gen_pd_hs_contraction, py::arg("dim"), py::arg("seed"));
    m.def("gen_doubly_stochastic", &gen::gen_doubly_stochastic, py::arg("dim"), py::arg("seed"));
    m.def("gen_pd_doubly_stochastic", &gen::gen_pd_doubly_stochastic, py::arg("dim"),
          py::arg("seed"), py::arg("alpha") = 0.25);

    // harmonic-series bounds
    m.def(
        "harmonic_inv_sqrt_bounds",
        [](std::size_t v) {
            audit::HarmonicBounds b = audit::harmonic_inv_sqrt_bounds(v);
            py::dict d;
            d["v"] = b.v;
            d["sum_inv_sqrt"] = b.sum_inv_sqrt;
            d["lower"] = b.lower;
            d["upper"] = b.upper;
            return d;
        },
        py::arg("v"));
    m.def(
        "sqrt_sum_chain",
        [](std::size_t v) {
            audit::SqrtSumChain c = audit::sqrt_sum_chain(v);
            py::dict d;
            d["v"] = c.v;
            d["sum_sqrt"] = c.sum_sqrt;
            d["middle"] = c.middle;
            d["cap"] = c.cap;
            return d;
        },
        py::arg("v"));
    m.def(
        "weighted_harmonic_bounds",
        [](const std::vector<double>& xs) {
            audit::WeightedHarmonicResult r = audit::weighted_harmonic_bounds(xs);
            py::dict d;
            d["v"] = r.v;
            d["value"] = r.value;
            d["lower_statement"] = r.lower_statement;
            d["lower_proof"] = r.lower_proof;
            d["upper"] = r.upper;
            return d;
        },
        py::arg("weights"));
    m.def(
        "sweep_inv_sqrt_bounds",
        [](std::size_t lo, std::size_t hi) {
            audit::SweepResult r = audit::sweep_inv_sqrt_bounds(lo, hi);
            return py::make_tuple(r.min_margin, r.violations);
        },
        py::arg("v_lo"), py::arg("v_hi"), "Returns (min_margin, violations)");
    m.def(
        "sweep_sqrt_sum_chain",
        [](std::size_t lo, std::size_t hi) {
            audit::SweepResult r = audit::sweep_sqrt_sum_chain(lo, hi);
            return py::make_tuple(r.min_margin, r.violations);
        },
        py::arg("v_lo"), py::arg("v_hi"), "Returns (min_margin, violations)");

    // inequality sides
    m.def(
        "t010_sides",
        [](const Matrix& a) {
            audit::TwoSides s = audit::t010_sides(a);
            return py::make_tuple(s.lhs, s.rhs);
        },
        py::arg("a"), "Returns (lhs, rhs)");
    m.def(
        "c1_sides",
        [](const Matrix& a) {
            audit::TwoSides s = audit::c1_sides(a);
            return py::make_tuple(s.lhs, s.rhs);
        },
        py::arg("a"), "Returns (lhs, rhs)");
    m.def(
        "t0_sides",
        [](const Matrix& x, const Matrix& a, const std::string& interpretation) {
            audit::T0Sides s =
                audit::t0_sides(x, a, audit::parse_interpretation(interpretation));
            py::dict d;
            d["lower"] = s.lower;
            d["middle"] = s.middle;
            d["upper"] = s.upper;
            d["m"] = s.m;
            return d;
        },
        py::arg("x"), py::arg("a"), py::arg("interpretation") = "floor_t1");
    m.def(
        "kyfan_variational_check",
        [](const Matrix& a, std::size_t k, std::size_t tuples, std::uint64_t seed) {
            audit::KyFanVariational r = audit::kyfan_variational_check(a, k, tuples, seed);
            py::dict d;
            d["best_sampled"] = r.best_sampled;
            d["svd_value"] = r.svd_value;
            d["attained"] = r.attained;
            return d;
        },
        py::arg("a"), py::arg("k"), py::arg("tuples") = 32, py::arg("seed") = 42);
    m.def("fan_dominance", &audit::fan_dominance, py::arg("a"), py::arg("b"),
          py::arg("tol") = 1e-9);

    // audit runner + reports
    py::class_<audit::Violation>(m, "Violation")
        .def_readonly("dim", &audit::Violation::dim)
        .def_readonly("trial", &audit::Violation::trial)
        .def_readonly("margin", &audit::Violation::margin)
        .def_readonly("artifact", &audit::Violation::artifact);
    py::class_<audit::DimResult>(m, "DimResult")
        .def_readonly("dim", &audit::DimResult::dim)
        .def_readonly("trials", &audit::DimResult::trials)
        .def_readonly("min_margin", &audit::DimResult::min_margin)
        .def_readonly("violations", &audit::DimResult::violations)
        .def_readonly("extra", &audit::DimResult::extra);
    py::class_<audit::AuditReport>(m, "AuditReport")
        .def_readonly("check_name", &audit::AuditReport::check_name)
        .def_readonly("dim_lo", &audit::AuditReport::dim_lo)
        .def_readonly("dim_hi", &audit::AuditReport::dim_hi)
        .def_readonly("trials_per_dim", &audit::AuditReport::trials_per_dim)
        .def_readonly("master_seed", &audit::AuditReport::master_seed)
        .def_readonly("tolerance", &audit::AuditReport::tolerance)
        .def_readonly("results", &audit::AuditReport::results)
        .def_readonly("violations", &audit::AuditReport::violations)
        .def_readonly("min_margin", &audit::AuditReport::min_margin)
        .def_readonly("flags", &audit::AuditReport::flags);

    m.def("registered_checks", &audit::registered_checks);
    m.def(
        "run_audit",
        [](const std::string& check, std::size_t dim_lo, std::size_t dim_hi, std::size_t trials,
           std::uint64_t seed, double tol, const std::string& interpretation,
           const std::string& artifact_dir) {
            audit::AuditOptions opts;
            opts.interpretation = audit::parse_interpretation(interpretation);
            opts.artifact_dir = artifact_dir;
            return audit::run_audit(check, dim_lo, dim_hi, trials, seed, tol, opts);
        },
        py::arg("check"), py::arg("dim_lo") = 2, py::arg("dim_hi") = 8,
        py::arg("trials") = 1000, py::arg("seed") = 42, py::arg("tol") = 1e-9,
        py::arg("interpretation") = "floor_t1", py::arg("artifact_dir") = "");
    m.def("report_to_json", &report_to_json, py::arg("report"), py::arg("config_echo"),
          py::arg("started_unix_seconds"));
    m.def("report_to_csv", &report_to_csv, py::arg("report"));

    // geometry
    m.def("geometry_models", []() {
        std::vector<std::string> names;
        for (const auto& model : geom::builtin_models()) names.push_back(model.name);
        return names;
    });
    m.def(
        "geometry_audit",
        [](const std::string& name, std::size_t grid, bool laplacian_negative, double geo_tol) {
            const auto& model = geom::builtin_model(name);
            geom::GeoOptions opts;
            opts.laplacian_negative = laplacian_negative;
            opts.geo_tol = geo_tol;
            auto points = geom::sample_grid(model, grid);
            geom::TheoremVerdict tv = geom::check_theorem_4_2(model, points, opts);
            geom::CrResiduals cr = geom::check_cr_structure(model, points, opts);
            py::dict d;
            d["model"] = model.name;
            d["points"] = tv.points.size();
            d["verdict"] = tv.verdict;
            d["holds"] = tv.holds;
            d["equality"] = tv.equality;
            d["min_margin"] = tv.min_margin;
            d["max_abs_margin"] = tv.max_abs_margin;
            py::dict crd;
            crd["dt_invariance"] = cr.dt_invariance;
            crd["dperp_antiinvariance"] = cr.dperp_antiinvariance;
            crd["metric_block"] = cr.metric_block;
            crd["warp_factor"] = cr.warp_factor;
            d["cr_residuals"] = crd;
            d["dt_minimality"] = geom::check_dt_minimality(model, points, opts);
            d["h_xi_xi"] = geom::check_xi_relations(model, points, opts);
            if (tv.diagnostics.populated) {
                py::dict diag;
                diag["tg_residual"] = tv.diagnostics.tg_residual;
                diag["umbilic_residual"] = tv.diagnostics.umbilic_residual;
                diag["mean_curvature_norm"] = tv.diagnostics.mean_curvature_norm;
                d["equality_diagnostics"] = diag;
            }
            return d;
        },
        py::arg("model"), py::arg("grid") = 5, py::arg("laplacian_negative") = false,
        py::arg("geo_tol") = 1e-6);
}
