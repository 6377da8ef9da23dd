#pragma once

// Numerical geometry of contact CR-warped product immersions into the
// cosymplectic model space R^{2m+1}.
//
// Ambient conventions (fixed here, everything else derives from them):
//   * coordinates are interleaved pairs followed by the Reeb coordinate:
//     (x_1, y_1, x_2, y_2, ..., x_m, y_m, z);
//   * the structure tensor acts on the coordinate frame as
//     phi(d/dx_i) = d/dy_i,  phi(d/dy_i) = -d/dx_i,  phi(d/dz) = 0;
//   * xi = d/dz, eta = dz, metric Euclidean, curvature parameter c_c = 0
//     (slots for nonzero c_c are kept in the inequality).
//
// A model is a black-box chart -> R^{2m+1} map plus its declared product
// structure: the first n1 chart coordinates parametrize the holomorphic-like
// factor (containing the xi direction), the remaining n2 the totally real
// fiber, and `warping` gives the positive warp factor as a function of the
// first n1 coordinates. Nothing is symbolic: frames, metrics and second
// fundamental forms come from finite differences of the map.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "warpineq/matrix.hpp"

namespace warpineq::geom {

using Vec = std::vector<double>;

struct AmbientCosymplectic {
    int m = 2;        // ambient dimension 2m + 1
    double c_c = 0.0; // holomorphic sectional curvature of the model

    int dim() const { return 2 * m + 1; }
    Vec xi() const;            // d/dz
    Vec phi(const Vec& u) const;
};

struct ImmersionModel {
    std::string name;
    AmbientCosymplectic ambient;
    int n1 = 0; // chart coordinates of the phi-invariant factor (xi included)
    int n2 = 0; // chart coordinates of the anti-invariant fiber
    std::vector<std::pair<double, double>> chart; // per-axis bounds, n1 + n2 axes
    int xi_index = 0; // chart coordinate mapped straight onto d/dz

    std::function<Vec(std::span<const double>)> map;        // F: chart -> R^{2m+1}
    std::function<double(std::span<const double>)> warping; // f(first n1 coords) > 0

    int dim() const { return n1 + n2; }
};

struct GeoOptions {
    // Relative finite-difference scales (times the axis span).
    double fd1 = 1e-6; // Jacobian step (Richardson-extrapolated central)
    double fd2 = 1e-4; // second-derivative step
    double proj_tol = 1e-8;
    double metric_tol = 1e-7;
    double geo_tol = 1e-6;
    bool laplacian_negative = false; // flip reported sign of the Laplacian
};

// Jacobian columns and the orthonormal tangent frame (modified Gram-Schmidt
// in chart-coordinate order, so the first n1 frame vectors span the
// phi-invariant distribution). Throws on a degenerate point (pivot below
// proj_tol).
struct TangentFrame {
    std::vector<Vec> jacobian; // n columns, ambient vectors
    std::vector<Vec> frame;    // n orthonormal ambient vectors
    Matrix metric;             // induced metric in chart coordinates, J^T J
    Matrix coeffs;             // frame[s] = sum_i coeffs(i, s) * jacobian[i]
};

TangentFrame tangent_frame(const ImmersionModel& model, std::span<const double> p,
                           const GeoOptions& opts = {});

// Second fundamental form in the orthonormal frame plus the warping terms of
// the point. h stores n*n ambient vectors, h[r*n+s] == h[s*n+r] by
// construction; components are normal to the frame by construction as well.
struct PointGeometry {
    Vec point;
    TangentFrame tf;
    std::vector<Vec> h;
    double h_sq = 0.0;        // squared Hilbert-Schmidt norm of h
    double grad_lnf_sq = 0.0; // |grad ln f|^2 on the first factor
    double lap_lnf = 0.0;     // Laplace-Beltrami of ln f (sign per options)
    double rhs = 0.0;         // 2 n2 (grad_lnf_sq - lap_lnf + (n1-1) c_c / 4)
};

PointGeometry second_fundamental_form(const ImmersionModel& model, std::span<const double> p,
                                      const GeoOptions& opts = {});

struct WarpingTerms {
    double grad_lnf_sq = 0.0;
    double lap_lnf = 0.0;
};

WarpingTerms warping_terms(const ImmersionModel& model, std::span<const double> p,
                           const GeoOptions& opts = {});

// Residuals of the declared structure, maxed over the given points:
//   dt_invariance:        phi of the first-factor frame stays in that span
//   dperp_antiinvariance: phi of fiber frame vectors is normal to the whole
//                         tangent space
//   metric_block:         no metric coupling between the two factors
//   warp_factor:          fiber metric block separates as f(p1)^2 * (block at
//                         a reference first-factor point)
struct CrResiduals {
    double dt_invariance = 0.0;
    double dperp_antiinvariance = 0.0;
    double metric_block = 0.0;
    double warp_factor = 0.0;

    double max() const;
};

CrResiduals check_cr_structure(const ImmersionModel& model,
                               const std::vector<Vec>& points, const GeoOptions& opts = {});

struct PointRecord {
    Vec point;
    double h_sq = 0.0;
    double grad_lnf_sq = 0.0;
    double lap_lnf = 0.0;
    double rhs = 0.0;
    double margin = 0.0; // h_sq - rhs
};

struct EqualityDiagnostics {
    bool populated = false;
    double tg_residual = 0.0;         // ||h|| restricted to the first factor
    double umbilic_residual = 0.0;    // fiber block versus its mean curvature
    double mean_curvature_norm = 0.0; // |trace h|
};

struct TheoremVerdict {
    std::vector<PointRecord> points;
    double min_margin = 0.0;
    double max_abs_margin = 0.0;
    bool holds = false;    // margin >= -geo_tol everywhere
    bool equality = false; // |margin| < geo_tol everywhere
    EqualityDiagnostics diagnostics; // populated when equality holds
    std::string verdict;   // "equality", "strict", "holds", "violated"
};

// The warped-product curvature inequality h_sq >= rhs at every sample point.
// Model invariants are verified first at each point; a violated invariant is
// an error naming it, not an inequality violation.
TheoremVerdict check_theorem_4_2(const ImmersionModel& model,
                                 const std::vector<Vec>& points, const GeoOptions& opts = {});

// Max over points of |sum_{i < n1} h(e_i, e_i)| — the first factor of a
// warped product sits minimally in the immersion.
double check_dt_minimality(const ImmersionModel& model, const std::vector<Vec>& points,
                           const GeoOptions& opts = {});

// Max over points of |h(xi, xi)|; the Reeb direction is totally geodesic.
double check_xi_relations(const ImmersionModel& model, const std::vector<Vec>& points,
                          const GeoOptions& opts = {});

struct ShapeOperator {
    Matrix full;      // <h(e_r, e_s), zeta>, n x n
    Matrix xi_block;  // same with the xi row/column removed, (n-1) x (n-1)
    int xi_frame_index = 0;
};

// zeta must be unit and normal to the tangent space within proj_tol (the
// error carries the tangential residual). Ties A_zeta back to h through
// <A_zeta X, Y> = <h(X, Y), zeta>.
ShapeOperator shape_operator(const ImmersionModel& model, std::span<const double> p,
                             const Vec& zeta, const GeoOptions& opts = {});

// Uniform grid over the chart with `per_axis` samples per axis, inset from
// the boundary so all finite-difference stencils stay interior.
std::vector<Vec> sample_grid(const ImmersionModel& model, std::size_t per_axis);

// Catalog: "flat-product" and "chen-cone" realize the equality case of the
// curvature inequality, "circle-fiber" holds strictly with unit margin.
std::vector<ImmersionModel> builtin_models();
const ImmersionModel& builtin_model(const std::string& name);

} // namespace warpineq::geom
