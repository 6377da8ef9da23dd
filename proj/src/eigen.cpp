#include "warpineq/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "warpineq/errors.hpp"

namespace warpineq {

namespace {

void require_symmetric(const Matrix& a, const char* who) {
    if (!a.is_square()) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!a.is_symmetric(1e-12)) {
        throw std::invalid_argument(std::string(who) + ": matrix is not symmetric within "
                                    "1e-12 relative tolerance");
    }
}

double off_diagonal_mass(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

} // namespace

SymmetricEigen symmetric_eigen(const Matrix& input) {
    require_symmetric(input, "symmetric_eigen");
    const std::size_t n = input.rows();
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    // Termination: off-diagonal Frobenius mass below 1e-13 of the input's
    // Hilbert-Schmidt norm. A zero input passes immediately.
    const double threshold = 1e-13 * hs_norm(input);
    const int max_sweeps = 100;

    double off = off_diagonal_mass(a);
    int sweep = 0;
    while (off > threshold && sweep < max_sweeps) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                // Smaller-angle root of t^2 + 2 t theta - 1 = 0, the standard
                // numerically stable choice.
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double tau = s / (1.0 + c);

                double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip - s * (aiq + tau * aip);
                    a(i, q) = aiq + s * (aip - tau * aiq);
                    a(p, i) = a(i, p);
                    a(q, i) = a(i, q);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip - s * (viq + tau * vip);
                    v(i, q) = viq + s * (vip - tau * viq);
                }
            }
        }
        off = off_diagonal_mass(a);
        ++sweep;
    }
    if (off > threshold) {
        throw ConvergenceError("symmetric_eigen: Jacobi did not converge in " +
                               std::to_string(max_sweeps) + " sweeps; off-diagonal residual " +
                               std::to_string(off), off);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

SpectralSummary singular_values(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw std::invalid_argument("singular_values: empty matrix");
    }
    // A^T A accumulates (i,j) and (j,i) in the same k-order, so it is exactly
    // symmetric in floating point.
    Matrix gram = multiply(adjoint(a), a);
    SymmetricEigen eig = symmetric_eigen(gram);

    const std::size_t count = std::min(a.rows(), a.cols());
    SpectralSummary out;
    out.singular_values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.singular_values[i] = std::sqrt(std::max(eig.values[i], 0.0));
    }
    if (a.is_square() && a.is_symmetric(1e-12)) {
        out.eigenvalues_symmetric = symmetric_eigen(a).values;
    }
    return out;
}

double spectral_norm(const Matrix& a) {
    return singular_values(a).singular_values.front();
}

double schatten_sum_norm(const Matrix& a, double p) {
    if (!(p >= 1.0)) {
        throw std::invalid_argument("schatten_sum_norm: p must be >= 1, got " +
                                    std::to_string(p));
    }
    double acc = 0.0;
    for (double t : singular_values(a).singular_values) acc += std::pow(t, p);
    return acc;
}

double kyfan_norm(const Matrix& a, std::size_t k) {
    const std::size_t v = std::min(a.rows(), a.cols());
    if (k < 1 || k > v) {
        throw std::invalid_argument("kyfan_norm: k must be in [1, " + std::to_string(v) +
                                    "], got " + std::to_string(k));
    }
    auto t = singular_values(a).singular_values;
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += t[j];
    return acc;
}

PsdOrderWitness psd_order(const Matrix& a, const Matrix& b, double order_tolerance) {
    require_symmetric(a, "psd_order");
    require_symmetric(b, "psd_order");
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("psd_order: dimension mismatch " +
                                    std::to_string(a.rows()) + " vs " +
                                    std::to_string(b.rows()));
    }
    Matrix diff = subtract(a, b);
    // Symmetrize the difference: a and b each pass the 1e-12 check but their
    // asymmetries need not cancel.
    for (std::size_t i = 0; i < diff.rows(); ++i) {
        for (std::size_t j = i + 1; j < diff.cols(); ++j) {
            double m = 0.5 * (diff(i, j) + diff(j, i));
            diff(i, j) = m;
            diff(j, i) = m;
        }
    }
    SymmetricEigen eig = symmetric_eigen(diff);
    PsdOrderWitness w;
    w.lhs_minus_rhs_min_eigenvalue = eig.values.back();
    w.holds = w.lhs_minus_rhs_min_eigenvalue >= -order_tolerance;
    return w;
}

Matrix inverse_sqrt_pd(const Matrix& a) {
    require_symmetric(a, "inverse_sqrt_pd");
    SymmetricEigen eig = symmetric_eigen(a);
    double min_lambda = eig.values.back();
    if (min_lambda <= kPdFloor) {
        throw HypothesisError("inverse_sqrt_pd: matrix is not positive definite "
                              "(eigenvalue " + std::to_string(min_lambda) + " <= " +
                              std::to_string(kPdFloor) + ")");
    }
    const std::size_t n = a.rows();
    Matrix scaled(n, n); // Q * diag(lambda^{-1/2})
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            scaled(i, k) = eig.vectors(i, k) / std::sqrt(eig.values[k]);
        }
    }
    Matrix out = multiply(scaled, adjoint(eig.vectors));
    for (std::size_t i = 0; i < n; ++i) { // exact symmetry for downstream checks
        for (std::size_t j = i + 1; j < n; ++j) {
            double m = 0.5 * (out(i, j) + out(j, i));
            out(i, j) = m;
            out(j, i) = m;
        }
    }
    return out;
}

Matrix matrix_power(const Matrix& a, std::size_t k) {
    if (!a.is_square()) throw std::invalid_argument("matrix_power: matrix must be square");
    if (k < 1) throw std::invalid_argument("matrix_power: exponent must be >= 1");
    Matrix out = a;
    for (std::size_t i = 1; i < k; ++i) out = multiply(out, a);
    return out;
}

} // namespace warpineq
