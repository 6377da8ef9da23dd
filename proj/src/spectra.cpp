#include "warpineq/spectra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "warpineq/errors.hpp"
#include "warpineq/rng.hpp"

namespace warpineq::gen {

namespace {

void require_dim(std::size_t dim) {
    if (dim < 2 || dim > 64) {
        throw std::invalid_argument("generator: dim must be in [2, 64], got " +
                                    std::to_string(dim));
    }
}

Matrix normal_matrix(std::size_t dim, Rng& rng) {
    Matrix g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.normal();
    return g;
}

// Modified Gram-Schmidt on the columns; returns false on near-breakdown.
bool orthonormalize_columns(Matrix& a, double pivot_floor) {
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += a(i, k) * a(i, j);
            for (std::size_t i = 0; i < n; ++i) a(i, j) -= dot * a(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += a(i, j) * a(i, j);
        norm = std::sqrt(norm);
        if (norm < pivot_floor) return false;
        for (std::size_t i = 0; i < n; ++i) a(i, j) /= norm;
    }
    return true;
}

} // namespace

Matrix gen_orthogonal(std::size_t dim, std::uint64_t seed) {
    require_dim(dim);
    Rng rng(seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Matrix q = normal_matrix(dim, rng);
        if (orthonormalize_columns(q, 1e-8)) return q;
    }
    throw ConvergenceError("gen_orthogonal: Gram-Schmidt broke down on 8 consecutive draws",
                           0.0);
}

Matrix gen_symmetric(std::size_t dim, std::uint64_t seed) {
    require_dim(dim);
    Rng rng(seed);
    Matrix g = normal_matrix(dim, rng);
    Matrix out(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out(i, j) = 0.5 * (g(i, j) + g(j, i));
    return out;
}

Matrix gen_positive_definite(std::size_t dim, std::uint64_t seed) {
    require_dim(dim);
    // Orthogonal frame and spectrum come from disjoint substreams so the
    // eigenvalues do not depend on how many draws the frame consumed.
    Matrix q = gen_orthogonal(dim, derive_seed(seed, dim, 0, 1));
    Rng rng(derive_seed(seed, dim, 0, 2));
    std::vector<double> lambda(dim);
    for (double& l : lambda) l = rng.uniform(0.1, 10.0);

    Matrix scaled(dim, dim); // Q * diag(lambda)
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) scaled(i, k) = q(i, k) * lambda[k];
    Matrix out = multiply(scaled, adjoint(q));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            double m = 0.5 * (out(i, j) + out(j, i));
            out(i, j) = m;
            out(j, i) = m;
        }
    }
    return out;
}

Matrix gen_pd_hs_contraction(std::size_t dim, std::uint64_t seed) {
    require_dim(dim);
    Matrix a = gen_positive_definite(dim, derive_seed(seed, dim, 0, 3));
    Rng rng(derive_seed(seed, dim, 0, 4));
    double target = rng.uniform(0.05, 0.95);
    return scale(a, target / hs_norm(a));
}

Matrix sinkhorn_normalize(Matrix a, double tol, int max_sweeps) {
    if (!a.is_square()) throw std::invalid_argument("sinkhorn_normalize: matrix must be square");
    const std::size_t n = a.rows();
    double residual = 0.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            double rs = 0.0;
            for (std::size_t j = 0; j < n; ++j) rs += a(i, j);
            for (std::size_t j = 0; j < n; ++j) a(i, j) /= rs;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double cs = 0.0;
            for (std::size_t i = 0; i < n; ++i) cs += a(i, j);
            for (std::size_t i = 0; i < n; ++i) a(i, j) /= cs;
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double rs = 0.0, cs = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                rs += a(i, j);
                cs += a(j, i);
            }
            residual = std::max({residual, std::fabs(rs - 1.0), std::fabs(cs - 1.0)});
        }
        if (residual <= tol) return a;
    }
    throw ConvergenceError("sinkhorn_normalize: residual " + std::to_string(residual) +
                           " after " + std::to_string(max_sweeps) + " sweeps", residual);
}

Matrix gen_doubly_stochastic(std::size_t dim, std::uint64_t seed) {
    require_dim(dim);
    Rng rng(seed);
    Matrix a(dim, dim);
    // Strictly positive start guarantees Sinkhorn convergence.
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) a(i, j) = rng.uniform(0.1, 1.0);
    return sinkhorn_normalize(std::move(a));
}

Matrix mix_with_identity(const Matrix& s, double alpha) {
    if (!s.is_square()) throw std::invalid_argument("mix_with_identity: matrix must be square");
    Matrix out = scale(s, alpha);
    for (std::size_t i = 0; i < s.rows(); ++i) out(i, i) += 1.0 - alpha;
    return out;
}

Matrix gen_pd_doubly_stochastic(std::size_t dim, std::uint64_t seed, double alpha) {
    require_dim(dim);
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("gen_pd_doubly_stochastic: alpha must lie in (0, 0.5), got " +
                                    std::to_string(alpha));
    }
    Matrix d = gen_doubly_stochastic(dim, seed);
    // Symmetrize (exactly doubly stochastic in exact arithmetic), clean up the
    // numerical drift with another Sinkhorn pass, and symmetrize again so the
    // output is exactly symmetric.
    Matrix s(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) s(i, j) = 0.5 * (d(i, j) + d(j, i));
    s = sinkhorn_normalize(std::move(s));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            double m = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = m;
            s(j, i) = m;
        }
    }
    // Eigenvalues of symmetric doubly stochastic s lie in [-1, 1], so the mix
    // is bounded below by 1 - 2 alpha > 0.
    return mix_with_identity(s, alpha);
}

Matrix generate(const GenSpec& spec) {
    switch (spec.kind) {
        case MatrixKind::orthogonal: return gen_orthogonal(spec.dim, spec.seed);
        case MatrixKind::symmetric: return gen_symmetric(spec.dim, spec.seed);
        case MatrixKind::positive_definite: return gen_positive_definite(spec.dim, spec.seed);
        case MatrixKind::pd_hs_contraction: return gen_pd_hs_contraction(spec.dim, spec.seed);
        case MatrixKind::doubly_stochastic: return gen_doubly_stochastic(spec.dim, spec.seed);
        case MatrixKind::pd_doubly_stochastic:
            return gen_pd_doubly_stochastic(spec.dim, spec.seed, spec.alpha);
    }
    throw std::invalid_argument("generate: unknown matrix kind");
}

} // namespace warpineq::gen
