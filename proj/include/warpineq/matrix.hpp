#pragma once

// Dense real matrix with row-major storage, plus the entrywise operations the
// audit checks are phrased in. Everything here is deterministic: multiply
// accumulates in a fixed order so repeated runs produce identical bits.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace warpineq {

class Matrix {
public:
    Matrix() = default;

    // Zero matrix.
    Matrix(std::size_t rows, std::size_t cols);

    // Takes row-major entries; throws std::invalid_argument on a size
    // mismatch or any non-finite entry.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    double max_abs() const;

    // Max |a_ij - a_ji| <= rel_tol * max_abs(). Zero matrices are symmetric.
    bool is_symmetric(double rel_tol = 1e-12) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& a); // transpose; entries are real
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

// Block-diagonal direct sum. Every block must be square.
Matrix direct_sum(const std::vector<Matrix>& blocks);

// Hilbert-Schmidt norm: sqrt of the sum of squared entries.
double hs_norm(const Matrix& a);

// Entrywise >= -tol and all row/column sums within [1 - tol, 1 + tol].
bool is_doubly_stochastic(const Matrix& a, double tol);

// Text format: first line "rows cols", then one line per row with the entries
// separated by single spaces, printed with 17 significant digits (lossless
// round trip). Readers throw ParseError with a 1-based line number on
// malformed counts or non-finite values.
void write_matrix_text(std::ostream& os, const Matrix& a);
Matrix read_matrix_text(std::istream& is);
void save_matrix_text(const std::string& path, const Matrix& a);
Matrix load_matrix_text(const std::string& path);

} // namespace warpineq
