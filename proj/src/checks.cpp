#include "warpineq/checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "warpineq/eigen.hpp"
#include "warpineq/errors.hpp"
#include "warpineq/rng.hpp"

namespace warpineq::audit {

namespace {

// Shared hypothesis gate for the power-sum checks: square, symmetric,
// dimension >= 2, positive definite. Returns the eigenvalues.
std::vector<double> require_spd(const Matrix& a, const char* who) {
    if (!a.is_square()) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
    }
    if (!a.is_symmetric(1e-12)) {
        throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
    }
    if (a.rows() < 2) {
        throw HypothesisError(std::string(who) + ": requires dimension >= 2, got " +
                              std::to_string(a.rows()));
    }
    auto values = symmetric_eigen(a).values;
    if (values.back() <= kPdFloor) {
        throw HypothesisError(std::string(who) + ": matrix is not positive definite "
                              "(eigenvalue " + std::to_string(values.back()) + ")");
    }
    return values;
}

// sum_{k=1..v} sqrt(k) A^k, accumulated through a running power.
double weighted_power_sum_hs(const Matrix& a) {
    const std::size_t v = a.rows();
    Matrix power = a;
    Matrix acc = scale(a, 1.0); // sqrt(1) = 1
    for (std::size_t k = 2; k <= v; ++k) {
        power = multiply(power, a);
        acc = add(acc, scale(power, std::sqrt(static_cast<double>(k))));
    }
    return hs_norm(acc);
}

} // namespace

TwoSides t010_sides(const Matrix& a) {
    require_spd(a, "t010");
    const double u = hs_norm(a);
    if (u >= 1.0) {
        throw HypothesisError("t010: requires hs_norm(A) < 1, got " + std::to_string(u));
    }
    const double dv = static_cast<double>(a.rows());
    TwoSides out;
    out.lhs = weighted_power_sum_hs(a);
    out.rhs = dv * (dv + 1.0) * (std::sqrt(dv) - 0.5) * (u - std::pow(u, dv + 1.0)) / (1.0 - u);
    return out;
}

TwoSides c1_sides(const Matrix& a) {
    require_spd(a, "c1");
    if (!is_doubly_stochastic(a, 1e-8)) {
        throw HypothesisError("c1: matrix is not doubly stochastic within 1e-8");
    }
    const double dv = static_cast<double>(a.rows());
    TwoSides out;
    out.lhs = weighted_power_sum_hs(a);
    out.rhs = dv * dv * (dv + 1.0) * (std::sqrt(dv) - 0.5);
    return out;
}

T0Interpretation parse_interpretation(const std::string& name) {
    if (name == "floor_t1") return T0Interpretation::floor_t1;
    if (name == "floor_tv") return T0Interpretation::floor_tv;
    if (name == "dim") return T0Interpretation::dim;
    throw std::invalid_argument("unknown interpretation '" + name +
                                "' (expected floor_t1, floor_tv, or dim)");
}

std::string interpretation_name(T0Interpretation interp) {
    switch (interp) {
        case T0Interpretation::floor_t1: return "floor_t1";
        case T0Interpretation::floor_tv: return "floor_tv";
        case T0Interpretation::dim: return "dim";
    }
    return "?";
}

T0Sides t0_sides(const Matrix& x, const Matrix& a, T0Interpretation interp) {
    auto x_values = require_spd(x, "t0 (x)");
    auto a_values = require_spd(a, "t0 (a)");
    if (x.rows() != a.rows()) {
        throw std::invalid_argument("t0: dimension mismatch " + std::to_string(x.rows()) +
                                    " vs " + std::to_string(a.rows()));
    }
    const std::size_t v = a.rows();
    // Symmetric PD: singular values coincide with eigenvalues.
    const double t_gate = interp == T0Interpretation::floor_tv ? a_values.back()
                                                               : a_values.front();
    std::size_t m = v;
    if (interp != T0Interpretation::dim) {
        double fl = std::floor(t_gate);
        if (fl > static_cast<double>(v)) {
            throw HypothesisError("t0: hypothesis floor(t_" +
                                  std::string(interp == T0Interpretation::floor_tv ? "v" : "1") +
                                  "(A)) <= v fails: floor(" + std::to_string(t_gate) + ") > " +
                                  std::to_string(v));
        }
        m = static_cast<std::size_t>(std::max(fl, 1.0)); // clamp to [1, v]
    } else if (std::floor(a_values.front()) > static_cast<double>(v)) {
        throw HypothesisError("t0: hypothesis floor(t_1(A)) <= v fails: floor(" +
                              std::to_string(a_values.front()) + ") > " + std::to_string(v));
    }

    Matrix product = multiply(x, inverse_sqrt_pd(a));
    auto t_prod = singular_values(product).singular_values;

    T0Sides out;
    out.m = m;
    double dm = static_cast<double>(m);
    out.lower = x_values.back() * (2.0 * std::sqrt(dm + 1.0) - 2.0);
    for (std::size_t k = 0; k < m; ++k) out.middle += t_prod[k];
    out.upper = (2.0 * std::sqrt(dm) - 1.0) * x_values.front();
    return out;
}

namespace {

// Fill `vecs` with `count` orthonormal columns of length n drawn from the
// stream; falls back to re-drawing a column on breakdown.
std::vector<std::vector<double>> orthonormal_tuple(std::size_t n, std::size_t count, Rng& rng) {
    std::vector<std::vector<double>> vecs;
    vecs.reserve(count);
    while (vecs.size() < count) {
        std::vector<double> cand(n);
        for (double& c : cand) c = rng.normal();
        for (const auto& prev : vecs) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += prev[i] * cand[i];
            for (std::size_t i = 0; i < n; ++i) cand[i] -= dot * prev[i];
        }
        double norm = 0.0;
        for (double c : cand) norm += c * c;
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (double& c : cand) c /= norm;
        vecs.push_back(std::move(cand));
    }
    return vecs;
}

double bilinear_abs_sum(const Matrix& a, const std::vector<std::vector<double>>& ys,
                        const std::vector<std::vector<double>>& xs) {
    double acc = 0.0;
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double val = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double ax = 0.0;
            for (std::size_t c = 0; c < n; ++c) ax += a(r, c) * xs[j][c];
            val += ys[j][r] * ax;
        }
        acc += std::fabs(val);
    }
    return acc;
}

} // namespace

KyFanVariational kyfan_variational_check(const Matrix& a, std::size_t k,
                                         std::size_t tuples, std::uint64_t seed) {
    if (!a.is_square()) {
        throw std::invalid_argument("kyfan_variational_check: matrix must be square");
    }
    const std::size_t n = a.rows();
    if (k < 1 || k > n) {
        throw std::invalid_argument("kyfan_variational_check: k must be in [1, " +
                                    std::to_string(n) + "], got " + std::to_string(k));
    }

    KyFanVariational out;
    out.svd_value = kyfan_norm(a, k);

    // Attained value at the singular vector pairs. Right vectors come from
    // the A^T A eigenbasis; left vectors are A v / t, completed to an
    // orthonormal set through the kernel directions.
    SymmetricEigen gram = symmetric_eigen(multiply(adjoint(a), a));
    double t1 = std::sqrt(std::max(gram.values.front(), 0.0));
    std::vector<std::vector<double>> vs(k, std::vector<double>(n));
    std::vector<std::vector<double>> us;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) vs[j][i] = gram.vectors(i, j);
        double t = std::sqrt(std::max(gram.values[j], 0.0));
        if (t > 1e-12 * std::max(t1, 1.0)) {
            std::vector<double> u(n, 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) u[r] += a(r, c) * vs[j][c];
                u[r] /= t;
            }
            us.push_back(std::move(u));
        } else {
            // Kernel direction: |u^T A v| vanishes for any unit u, so any
            // orthonormal completion works. Use the first basis vector with a
            // healthy residual.
            for (std::size_t e = 0; e < n; ++e) {
                std::vector<double> u(n, 0.0);
                u[e] = 1.0;
                for (const auto& prev : us) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < n; ++i) dot += prev[i] * u[i];
                    for (std::size_t i = 0; i < n; ++i) u[i] -= dot * prev[i];
                }
                double norm = 0.0;
                for (double c : u) norm += c * c;
                norm = std::sqrt(norm);
                if (norm > 0.5) {
                    for (double& c : u) c /= norm;
                    us.push_back(std::move(u));
                    break;
                }
            }
        }
    }
    out.attained = bilinear_abs_sum(a, us, vs);

    Rng rng(seed);
    out.best_sampled = 0.0;
    for (std::size_t trial = 0; trial < tuples; ++trial) {
        auto xs = orthonormal_tuple(n, k, rng);
        auto ys = orthonormal_tuple(n, k, rng);
        out.best_sampled = std::max(out.best_sampled, bilinear_abs_sum(a, ys, xs));
    }
    return out;
}

bool fan_dominance(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("fan_dominance: shape mismatch");
    }
    auto ta = singular_values(a).singular_values;
    auto tb = singular_values(b).singular_values;
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < ta.size(); ++k) {
        sa += ta[k];
        sb += tb[k];
        if (sa < sb - tol) return false;
    }
    return true;
}

} // namespace warpineq::audit
