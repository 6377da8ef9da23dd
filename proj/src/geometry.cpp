#include "warpineq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "warpineq/eigen.hpp"
#include "warpineq/errors.hpp"

namespace warpineq::geom {

namespace {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void validate_model(const ImmersionModel& model) {
    if (model.n1 < 1 || model.n2 < 1) {
        throw std::invalid_argument("model '" + model.name + "': need n1 >= 1 and n2 >= 1");
    }
    if (model.chart.size() != static_cast<std::size_t>(model.dim())) {
        throw std::invalid_argument("model '" + model.name + "': chart boxes != n1 + n2");
    }
    for (const auto& [lo, hi] : model.chart) {
        if (!(hi > lo)) {
            throw std::invalid_argument("model '" + model.name + "': empty chart axis");
        }
    }
    if (model.xi_index < 0 || model.xi_index >= model.n1) {
        throw std::invalid_argument("model '" + model.name +
                                    "': xi_index must address a first-factor axis");
    }
    if (!model.map || !model.warping) {
        throw std::invalid_argument("model '" + model.name + "': map or warping missing");
    }
}

double axis_span(const ImmersionModel& model, int i) {
    return model.chart[static_cast<std::size_t>(i)].second -
           model.chart[static_cast<std::size_t>(i)].first;
}

Vec eval_map(const ImmersionModel& model, std::span<const double> q) {
    Vec out = model.map(q);
    if (out.size() != static_cast<std::size_t>(model.ambient.dim())) {
        throw HypothesisError("model '" + model.name + "': map returned " +
                              std::to_string(out.size()) + " components, ambient needs " +
                              std::to_string(model.ambient.dim()));
    }
    for (double v : out) {
        if (!std::isfinite(v)) {
            throw HypothesisError("model '" + model.name + "': map produced a non-finite value");
        }
    }
    return out;
}

Vec map_shifted(const ImmersionModel& model, std::span<const double> p, int axis, double off) {
    Vec q(p.begin(), p.end());
    q[static_cast<std::size_t>(axis)] += off;
    return eval_map(model, q);
}

// Richardson-extrapolated central difference of the map along a chart axis.
Vec jac_column(const ImmersionModel& model, std::span<const double> p, int axis, double h) {
    Vec f1p = map_shifted(model, p, axis, h);
    Vec f1m = map_shifted(model, p, axis, -h);
    Vec f2p = map_shifted(model, p, axis, 2.0 * h);
    Vec f2m = map_shifted(model, p, axis, -2.0 * h);
    Vec out(f1p.size());
    for (std::size_t a = 0; a < out.size(); ++a) {
        double d1 = (f1p[a] - f1m[a]) / (2.0 * h);
        double d2 = (f2p[a] - f2m[a]) / (4.0 * h);
        out[a] = (4.0 * d1 - d2) / 3.0;
    }
    return out;
}

// Plain central second derivative; fd2-scale steps keep truncation and
// roundoff balanced near their joint optimum for double precision.
Vec hessian_column(const ImmersionModel& model, std::span<const double> p, int i, int j,
                   const GeoOptions& opts) {
    double hi = opts.fd2 * axis_span(model, i);
    if (i == j) {
        Vec fp = map_shifted(model, p, i, hi);
        Vec fm = map_shifted(model, p, i, -hi);
        Vec f0 = eval_map(model, p);
        Vec out(f0.size());
        for (std::size_t a = 0; a < out.size(); ++a) {
            out[a] = (fp[a] - 2.0 * f0[a] + fm[a]) / (hi * hi);
        }
        return out;
    }
    double hj = opts.fd2 * axis_span(model, j);
    Vec q(p.begin(), p.end());
    auto at = [&](double di, double dj) {
        Vec r = q;
        r[static_cast<std::size_t>(i)] += di;
        r[static_cast<std::size_t>(j)] += dj;
        return eval_map(model, r);
    };
    Vec fpp = at(hi, hj), fpm = at(hi, -hj), fmp = at(-hi, hj), fmm = at(-hi, -hj);
    Vec out(fpp.size());
    for (std::size_t a = 0; a < out.size(); ++a) {
        out[a] = (fpp[a] - fpm[a] - fmp[a] + fmm[a]) / (4.0 * hi * hj);
    }
    return out;
}

double warp_value(const ImmersionModel& model, std::span<const double> q1) {
    double f = model.warping(q1);
    if (!std::isfinite(f) || f <= 0.0) {
        throw HypothesisError("model '" + model.name + "': warping factor must be positive, got " +
                              std::to_string(f));
    }
    return f;
}

// First-factor metric at first-factor coordinates q1 (fiber coordinates taken
// from `base`). Jacobian steps use the fd2 scale: these values feed a second
// differentiation, and fd1-scale roundoff would be amplified through it.
Matrix first_factor_metric(const ImmersionModel& model, const Vec& base,
                           std::span<const double> q1, const GeoOptions& opts) {
    Vec q = base;
    std::copy(q1.begin(), q1.end(), q.begin());
    std::vector<Vec> cols(static_cast<std::size_t>(model.n1));
    for (int i = 0; i < model.n1; ++i) {
        cols[static_cast<std::size_t>(i)] =
            jac_column(model, q, i, opts.fd2 * axis_span(model, i));
    }
    Matrix g1(static_cast<std::size_t>(model.n1), static_cast<std::size_t>(model.n1));
    for (int i = 0; i < model.n1; ++i) {
        for (int j = i; j < model.n1; ++j) {
            double v = dot(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
            g1(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
            g1(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
        }
    }
    return g1;
}

struct MetricInverse {
    Matrix inv;
    double det = 0.0;
};

MetricInverse spd_inverse(const Matrix& g, const std::string& what) {
    SymmetricEigen eig = symmetric_eigen(g);
    const std::size_t n = g.rows();
    if (eig.values.back() <= 0.0) {
        throw HypothesisError(what + " is not positive definite (min eigenvalue " +
                              std::to_string(eig.values.back()) + ")");
    }
    Matrix scaled(n, n);
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        det *= eig.values[k];
        for (std::size_t i = 0; i < n; ++i) {
            scaled(i, k) = eig.vectors(i, k) / eig.values[k];
        }
    }
    Matrix inv = multiply(scaled, adjoint(eig.vectors));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double m = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = m;
            inv(j, i) = m;
        }
    }
    return {std::move(inv), det};
}

// Richardson central derivative of ln f along a first-factor axis.
double dlnf_axis(const ImmersionModel& model, const Vec& q1, int axis, const GeoOptions& opts) {
    double h = opts.fd2 * axis_span(model, axis);
    auto at = [&](double off) {
        Vec q = q1;
        q[static_cast<std::size_t>(axis)] += off;
        return std::log(warp_value(model, q));
    };
    double d1 = (at(h) - at(-h)) / (2.0 * h);
    double d2 = (at(2.0 * h) - at(-2.0 * h)) / (4.0 * h);
    return (4.0 * d1 - d2) / 3.0;
}

// Contravariant flux V^i = sqrt(det g1) g1^{ij} d_j ln f at first-factor
// coordinates q1; its divergence gives the Laplace-Beltrami operator.
Vec flux_field(const ImmersionModel& model, const Vec& base, const Vec& q1,
               const GeoOptions& opts) {
    Matrix g1 = first_factor_metric(model, base, q1, opts);
    MetricInverse mi = spd_inverse(g1, "model '" + model.name + "': first-factor metric");
    const int n1 = model.n1;
    Vec dln(static_cast<std::size_t>(n1));
    for (int j = 0; j < n1; ++j) {
        dln[static_cast<std::size_t>(j)] = dlnf_axis(model, q1, j, opts);
    }
    double root = std::sqrt(mi.det);
    Vec v(static_cast<std::size_t>(n1), 0.0);
    for (int i = 0; i < n1; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n1; ++j) {
            acc += mi.inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *
                   dln[static_cast<std::size_t>(j)];
        }
        v[static_cast<std::size_t>(i)] = root * acc;
    }
    return v;
}

Vec normal_part(const Vec& v, const std::vector<Vec>& frame) {
    Vec out = v;
    for (const auto& e : frame) axpy(-dot(e, out), e, out);
    return out;
}

} // namespace

Vec AmbientCosymplectic::xi() const {
    Vec out(static_cast<std::size_t>(dim()), 0.0);
    out.back() = 1.0;
    return out;
}

Vec AmbientCosymplectic::phi(const Vec& u) const {
    if (u.size() != static_cast<std::size_t>(dim())) {
        throw std::invalid_argument("phi: vector has " + std::to_string(u.size()) +
                                    " components, ambient dimension is " + std::to_string(dim()));
    }
    Vec out(u.size(), 0.0);
    for (int i = 0; i < m; ++i) {
        std::size_t x = static_cast<std::size_t>(2 * i);
        out[x + 1] += u[x];  // phi(d/dx_i) = d/dy_i
        out[x] -= u[x + 1];  // phi(d/dy_i) = -d/dx_i
    }
    return out;
}

double CrResiduals::max() const {
    return std::max(std::max(dt_invariance, dperp_antiinvariance),
                    std::max(metric_block, warp_factor));
}

TangentFrame tangent_frame(const ImmersionModel& model, std::span<const double> p,
                           const GeoOptions& opts) {
    validate_model(model);
    const int n = model.dim();
    if (p.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("tangent_frame: point has " + std::to_string(p.size()) +
                                    " coordinates, chart has " + std::to_string(n));
    }

    TangentFrame tf;
    tf.jacobian.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        tf.jacobian.push_back(jac_column(model, p, i, opts.fd1 * axis_span(model, i)));
    }

    tf.metric = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double v = dot(tf.jacobian[static_cast<std::size_t>(i)],
                           tf.jacobian[static_cast<std::size_t>(j)]);
            tf.metric(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
            tf.metric(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
        }
    }

    // Modified Gram-Schmidt in chart order with coefficient tracking; two
    // projection passes keep the frame orthonormal well below proj_tol.
    tf.coeffs = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    std::vector<Vec> coeff_cols;
    for (int s = 0; s < n; ++s) {
        Vec u = tf.jacobian[static_cast<std::size_t>(s)];
        Vec c(static_cast<std::size_t>(n), 0.0);
        c[static_cast<std::size_t>(s)] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int r = 0; r < s; ++r) {
                double d = dot(tf.frame[static_cast<std::size_t>(r)], u);
                axpy(-d, tf.frame[static_cast<std::size_t>(r)], u);
                axpy(-d, coeff_cols[static_cast<std::size_t>(r)], c);
            }
        }
        double pivot = norm(u);
        if (pivot < opts.proj_tol) {
            throw HypothesisError("model '" + model.name + "': degenerate tangent frame, axis " +
                                  std::to_string(s) + " pivot " + std::to_string(pivot));
        }
        for (double& x : u) x /= pivot;
        for (double& x : c) x /= pivot;
        tf.frame.push_back(std::move(u));
        coeff_cols.push_back(std::move(c));
    }
    for (int s = 0; s < n; ++s) {
        for (int i = 0; i < n; ++i) {
            tf.coeffs(static_cast<std::size_t>(i), static_cast<std::size_t>(s)) =
                coeff_cols[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
        }
    }
    return tf;
}

WarpingTerms warping_terms(const ImmersionModel& model, std::span<const double> p,
                           const GeoOptions& opts) {
    validate_model(model);
    const int n1 = model.n1;
    Vec base(p.begin(), p.end());
    Vec p1(p.begin(), p.begin() + n1);

    Matrix g1 = first_factor_metric(model, base, p1, opts);
    MetricInverse mi = spd_inverse(g1, "model '" + model.name + "': first-factor metric");
    Vec dln(static_cast<std::size_t>(n1));
    for (int j = 0; j < n1; ++j) dln[static_cast<std::size_t>(j)] = dlnf_axis(model, p1, j, opts);

    WarpingTerms terms;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n1; ++j) {
            terms.grad_lnf_sq += dln[static_cast<std::size_t>(i)] *
                                 mi.inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *
                                 dln[static_cast<std::size_t>(j)];
        }
    }

    double divergence = 0.0;
    for (int i = 0; i < n1; ++i) {
        double h = opts.fd2 * axis_span(model, i);
        auto component = [&](double off) {
            Vec q1 = p1;
            q1[static_cast<std::size_t>(i)] += off;
            return flux_field(model, base, q1, opts)[static_cast<std::size_t>(i)];
        };
        double d1 = (component(h) - component(-h)) / (2.0 * h);
        double d2 = (component(2.0 * h) - component(-2.0 * h)) / (4.0 * h);
        divergence += (4.0 * d1 - d2) / 3.0;
    }
    terms.lap_lnf = divergence / std::sqrt(mi.det);
    if (opts.laplacian_negative) terms.lap_lnf = -terms.lap_lnf;
    return terms;
}

PointGeometry second_fundamental_form(const ImmersionModel& model, std::span<const double> p,
                                      const GeoOptions& opts) {
    PointGeometry pg;
    pg.point = Vec(p.begin(), p.end());
    pg.tf = tangent_frame(model, p, opts);
    const int n = model.dim();
    const std::size_t un = static_cast<std::size_t>(n);

    // Chart-coordinate second derivatives of the map, computed once per pair.
    std::vector<Vec> hess(un * un);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Vec col = hessian_column(model, p, i, j, opts);
            hess[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = col;
            hess[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = std::move(col);
        }
    }

    // h(E_r, E_s): transform to the orthonormal frame, then project out the
    // tangent space. The chart Hessian already carries everything normal;
    // derivative-of-coefficient terms are tangential and die in the projection.
    pg.h.assign(un * un, Vec());
    const std::size_t adim = static_cast<std::size_t>(model.ambient.dim());
    for (int r = 0; r < n; ++r) {
        for (int s = r; s < n; ++s) {
            Vec acc(adim, 0.0);
            for (int i = 0; i < n; ++i) {
                double cr = pg.tf.coeffs(static_cast<std::size_t>(i), static_cast<std::size_t>(r));
                if (cr == 0.0) continue;
                for (int j = 0; j < n; ++j) {
                    double cs =
                        pg.tf.coeffs(static_cast<std::size_t>(j), static_cast<std::size_t>(s));
                    if (cs == 0.0) continue;
                    axpy(cr * cs, hess[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)],
                         acc);
                }
            }
            Vec nor = normal_part(acc, pg.tf.frame);
            pg.h[static_cast<std::size_t>(r) * un + static_cast<std::size_t>(s)] = nor;
            pg.h[static_cast<std::size_t>(s) * un + static_cast<std::size_t>(r)] = std::move(nor);
        }
    }
    for (const auto& component : pg.h) pg.h_sq += dot(component, component);

    WarpingTerms terms = warping_terms(model, p, opts);
    pg.grad_lnf_sq = terms.grad_lnf_sq;
    pg.lap_lnf = terms.lap_lnf;
    pg.rhs = 2.0 * model.n2 *
             (terms.grad_lnf_sq - terms.lap_lnf +
              (model.n1 - 1) * model.ambient.c_c / 4.0);
    return pg;
}

CrResiduals check_cr_structure(const ImmersionModel& model, const std::vector<Vec>& points,
                               const GeoOptions& opts) {
    validate_model(model);
    const int n = model.dim();
    const int n1 = model.n1;
    CrResiduals res;

    // Reference first-factor coordinates for the separability test.
    Vec center1(static_cast<std::size_t>(n1));
    for (int i = 0; i < n1; ++i) {
        center1[static_cast<std::size_t>(i)] =
            0.5 * (model.chart[static_cast<std::size_t>(i)].first +
                   model.chart[static_cast<std::size_t>(i)].second);
    }
    double f_ref = warp_value(model, center1);

    for (const auto& point : points) {
        TangentFrame tf = tangent_frame(model, point, opts);

        for (int s = 0; s < n1; ++s) {
            Vec v = model.ambient.phi(tf.frame[static_cast<std::size_t>(s)]);
            for (int r = 0; r < n1; ++r) {
                axpy(-dot(tf.frame[static_cast<std::size_t>(r)], v),
                     tf.frame[static_cast<std::size_t>(r)], v);
            }
            res.dt_invariance = std::max(res.dt_invariance, norm(v));
        }
        for (int s = n1; s < n; ++s) {
            Vec v = model.ambient.phi(tf.frame[static_cast<std::size_t>(s)]);
            double tangential = 0.0;
            for (int r = 0; r < n; ++r) {
                double d = dot(tf.frame[static_cast<std::size_t>(r)], v);
                tangential += d * d;
            }
            res.dperp_antiinvariance = std::max(res.dperp_antiinvariance, std::sqrt(tangential));
        }
        for (int i = 0; i < n1; ++i) {
            for (int j = n1; j < n; ++j) {
                res.metric_block = std::max(
                    res.metric_block,
                    std::fabs(tf.metric(static_cast<std::size_t>(i), static_cast<std::size_t>(j))));
            }
        }

        // Fiber block must equal (f(p1)/f(ref))^2 times the block with the
        // first-factor coordinates moved to the reference.
        Vec p1(point.begin(), point.begin() + n1);
        double f_here = warp_value(model, p1);
        Vec ref_point = point;
        std::copy(center1.begin(), center1.end(), ref_point.begin());
        TangentFrame tf_ref = tangent_frame(model, ref_point, opts);
        double ratio = (f_here * f_here) / (f_ref * f_ref);
        for (int i = n1; i < n; ++i) {
            for (int j = n1; j < n; ++j) {
                double predicted = ratio * tf_ref.metric(static_cast<std::size_t>(i),
                                                         static_cast<std::size_t>(j));
                double actual =
                    tf.metric(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                res.warp_factor = std::max(res.warp_factor, std::fabs(actual - predicted));
            }
        }
    }
    return res;
}

TheoremVerdict check_theorem_4_2(const ImmersionModel& model, const std::vector<Vec>& points,
                                 const GeoOptions& opts) {
    if (points.empty()) {
        throw std::invalid_argument("check_theorem_4_2: no sample points");
    }

    CrResiduals cr = check_cr_structure(model, points, opts);
    auto gate = [&](double value, const char* what) {
        if (value > opts.metric_tol) {
            throw HypothesisError("model '" + model.name + "': invariant '" + what +
                                  "' residual " + std::to_string(value) + " exceeds " +
                                  std::to_string(opts.metric_tol));
        }
    };
    gate(cr.dt_invariance, "dt_invariance");
    gate(cr.dperp_antiinvariance, "dperp_antiinvariance");
    gate(cr.metric_block, "metric_block");
    gate(cr.warp_factor, "warp_factor");

    TheoremVerdict tv;
    tv.min_margin = std::numeric_limits<double>::infinity();
    const int n = model.dim();
    const int n1 = model.n1;
    double tg = 0.0, umbilic = 0.0, mean_curv = 0.0;

    for (const auto& point : points) {
        PointGeometry pg = second_fundamental_form(model, point, opts);
        PointRecord rec;
        rec.point = pg.point;
        rec.h_sq = pg.h_sq;
        rec.grad_lnf_sq = pg.grad_lnf_sq;
        rec.lap_lnf = pg.lap_lnf;
        rec.rhs = pg.rhs;
        rec.margin = pg.h_sq - pg.rhs;
        tv.min_margin = std::min(tv.min_margin, rec.margin);
        tv.max_abs_margin = std::max(tv.max_abs_margin, std::fabs(rec.margin));
        tv.points.push_back(std::move(rec));

        // Equality diagnostics (used only if the verdict lands on equality).
        const std::size_t un = static_cast<std::size_t>(n);
        double tg_sq = 0.0;
        for (int r = 0; r < n1; ++r) {
            for (int s = 0; s < n1; ++s) {
                const Vec& comp = pg.h[static_cast<std::size_t>(r) * un + static_cast<std::size_t>(s)];
                tg_sq += dot(comp, comp);
            }
        }
        tg = std::max(tg, std::sqrt(tg_sq));

        const std::size_t adim = static_cast<std::size_t>(model.ambient.dim());
        Vec fiber_mean(adim, 0.0);
        for (int a = n1; a < n; ++a) {
            axpy(1.0, pg.h[static_cast<std::size_t>(a) * un + static_cast<std::size_t>(a)],
                 fiber_mean);
        }
        for (double& x : fiber_mean) x /= static_cast<double>(model.n2);
        for (int a = n1; a < n; ++a) {
            for (int b = n1; b < n; ++b) {
                Vec d = pg.h[static_cast<std::size_t>(a) * un + static_cast<std::size_t>(b)];
                if (a == b) axpy(-1.0, fiber_mean, d);
                umbilic = std::max(umbilic, norm(d));
            }
        }

        Vec trace(adim, 0.0);
        for (int r = 0; r < n; ++r) {
            axpy(1.0, pg.h[static_cast<std::size_t>(r) * un + static_cast<std::size_t>(r)], trace);
        }
        mean_curv = std::max(mean_curv, norm(trace));
    }

    tv.holds = tv.min_margin >= -opts.geo_tol;
    tv.equality = tv.max_abs_margin <= opts.geo_tol;
    if (tv.equality) {
        tv.verdict = "equality";
        tv.diagnostics.populated = true;
        tv.diagnostics.tg_residual = tg;
        tv.diagnostics.umbilic_residual = umbilic;
        tv.diagnostics.mean_curvature_norm = mean_curv;
    } else if (!tv.holds) {
        tv.verdict = "violated";
    } else if (tv.min_margin > opts.geo_tol) {
        tv.verdict = "strict";
    } else {
        tv.verdict = "holds";
    }
    return tv;
}

double check_dt_minimality(const ImmersionModel& model, const std::vector<Vec>& points,
                           const GeoOptions& opts) {
    double worst = 0.0;
    for (const auto& point : points) {
        PointGeometry pg = second_fundamental_form(model, point, opts);
        const std::size_t un = static_cast<std::size_t>(model.dim());
        Vec trace(static_cast<std::size_t>(model.ambient.dim()), 0.0);
        for (int r = 0; r < model.n1; ++r) {
            axpy(1.0, pg.h[static_cast<std::size_t>(r) * un + static_cast<std::size_t>(r)], trace);
        }
        worst = std::max(worst, norm(trace));
    }
    return worst;
}

double check_xi_relations(const ImmersionModel& model, const std::vector<Vec>& points,
                          const GeoOptions& opts) {
    double worst = 0.0;
    for (const auto& point : points) {
        PointGeometry pg = second_fundamental_form(model, point, opts);
        const std::size_t un = static_cast<std::size_t>(model.dim());
        const std::size_t xi = static_cast<std::size_t>(model.xi_index);
        worst = std::max(worst, norm(pg.h[xi * un + xi]));
    }
    return worst;
}

ShapeOperator shape_operator(const ImmersionModel& model, std::span<const double> p,
                             const Vec& zeta, const GeoOptions& opts) {
    if (zeta.size() != static_cast<std::size_t>(model.ambient.dim())) {
        throw std::invalid_argument("shape_operator: normal vector has wrong dimension");
    }
    PointGeometry pg = second_fundamental_form(model, p, opts);
    double len = norm(zeta);
    if (std::fabs(len - 1.0) > opts.proj_tol) {
        throw HypothesisError("shape_operator: zeta must be unit, |zeta| = " +
                              std::to_string(len));
    }
    double tangential = 0.0;
    for (const auto& e : pg.tf.frame) {
        double d = dot(e, zeta);
        tangential += d * d;
    }
    tangential = std::sqrt(tangential);
    if (tangential > opts.proj_tol) {
        throw HypothesisError("shape_operator: zeta is not normal, tangential residual " +
                              std::to_string(tangential));
    }

    const int n = model.dim();
    const std::size_t un = static_cast<std::size_t>(n);
    ShapeOperator op;
    op.xi_frame_index = model.xi_index;
    op.full = Matrix(un, un);
    for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
            op.full(static_cast<std::size_t>(r), static_cast<std::size_t>(s)) =
                dot(pg.h[static_cast<std::size_t>(r) * un + static_cast<std::size_t>(s)], zeta);
        }
    }
    op.xi_block = Matrix(un - 1, un - 1);
    for (int r = 0, rr = 0; r < n; ++r) {
        if (r == model.xi_index) continue;
        for (int s = 0, ss = 0; s < n; ++s) {
            if (s == model.xi_index) continue;
            op.xi_block(static_cast<std::size_t>(rr), static_cast<std::size_t>(ss)) =
                op.full(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
            ++ss;
        }
        ++rr;
    }
    return op;
}

std::vector<Vec> sample_grid(const ImmersionModel& model, std::size_t per_axis) {
    validate_model(model);
    if (per_axis == 0) {
        throw std::invalid_argument("sample_grid: per_axis must be at least 1");
    }
    const int n = model.dim();
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto [lo, hi] = model.chart[static_cast<std::size_t>(i)];
        double inset = 1e-3 * (hi - lo);
        double a = lo + inset, b = hi - inset;
        auto& vals = axes[static_cast<std::size_t>(i)];
        if (per_axis == 1) {
            vals.push_back(0.5 * (a + b));
        } else {
            for (std::size_t k = 0; k < per_axis; ++k) {
                vals.push_back(a + (b - a) * static_cast<double>(k) /
                                       static_cast<double>(per_axis - 1));
            }
        }
    }
    std::vector<Vec> out;
    Vec point(static_cast<std::size_t>(n));
    std::function<void(int)> walk = [&](int axis) {
        if (axis == n) {
            out.push_back(point);
            return;
        }
        for (double v : axes[static_cast<std::size_t>(axis)]) {
            point[static_cast<std::size_t>(axis)] = v;
            walk(axis + 1);
        }
    };
    walk(0);
    return out;
}

std::vector<ImmersionModel> builtin_models() {
    std::vector<ImmersionModel> models;

    // Plain product: warp factor 1, totally geodesic, equality with h == 0.
    {
        ImmersionModel m;
        m.name = "flat-product";
        m.ambient = {2, 0.0};
        m.n1 = 3;
        m.n2 = 1;
        m.chart = {{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}};
        m.xi_index = 2;
        m.map = [](std::span<const double> q) {
            return Vec{q[0], q[1], q[3], 0.0, q[2]};
        };
        m.warping = [](std::span<const double>) { return 1.0; };
        models.push_back(std::move(m));
    }

    // Cone over a segment: warp factor sqrt(x^2 + y^2), realizes equality
    // with nonzero h.
    {
        ImmersionModel m;
        m.name = "chen-cone";
        m.ambient = {2, 0.0};
        m.n1 = 3;
        m.n2 = 1;
        m.chart = {{0.5, 2.0}, {-0.5, 0.5}, {-0.5, 0.5}, {0.2, 1.3}};
        m.xi_index = 2;
        m.map = [](std::span<const double> q) {
            double x = q[0], y = q[1], z = q[2], t = q[3];
            return Vec{x * std::cos(t), y * std::cos(t), x * std::sin(t), y * std::sin(t), z};
        };
        m.warping = [](std::span<const double> q1) {
            return std::sqrt(q1[0] * q1[0] + q1[1] * q1[1]);
        };
        models.push_back(std::move(m));
    }

    // Product with a circle fiber: warp factor 1 but curved fiber, strict
    // inequality with unit margin.
    {
        ImmersionModel m;
        m.name = "circle-fiber";
        m.ambient = {2, 0.0};
        m.n1 = 3;
        m.n2 = 1;
        m.chart = {{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {0.3, 1.2}};
        m.xi_index = 2;
        m.map = [](std::span<const double> q) {
            return Vec{q[0], q[1], std::cos(q[3]), std::sin(q[3]), q[2]};
        };
        m.warping = [](std::span<const double>) { return 1.0; };
        models.push_back(std::move(m));
    }
    return models;
}

const ImmersionModel& builtin_model(const std::string& name) {
    static const std::vector<ImmersionModel> models = builtin_models();
    for (const auto& m : models) {
        if (m.name == name) return m;
    }
    std::string known;
    for (const auto& m : models) {
        if (!known.empty()) known += ", ";
        known += m.name;
    }
    throw std::invalid_argument("unknown model '" + name + "'; available: " + known);
}

} // namespace warpineq::geom
