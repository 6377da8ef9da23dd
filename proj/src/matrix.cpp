#include "warpineq/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "warpineq/errors.hpp"

namespace warpineq {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("matrix: " + std::to_string(data_.size()) +
                                    " entries for a " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_) + " shape");
    }
    for (double x : data_) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("matrix: non-finite entry");
        }
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw std::invalid_argument("matrix: ragged initializer rows");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(entries));
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::fabs(x));
    return m;
}

bool Matrix::is_symmetric(double rel_tol) const {
    if (!is_square()) return false;
    double scale = max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = i + 1; j < cols_; ++j) {
            worst = std::max(worst, std::fabs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return worst <= rel_tol * scale;
}

namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
    throw std::invalid_argument(std::string(op) + ": incompatible shapes " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " and " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
}

} // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) shape_error("multiply", a, b);
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0; // fixed k-order accumulation: bitwise reproducible
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += a(i, k) * b(k, j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

Matrix adjoint(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = a(i, j);
        }
    }
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("add", a, b);
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("subtract", a, b);
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

Matrix scale(const Matrix& a, double s) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
    return out;
}

Matrix direct_sum(const std::vector<Matrix>& blocks) {
    std::size_t n = 0;
    for (const Matrix& b : blocks) {
        if (!b.is_square()) {
            throw std::invalid_argument("direct_sum: non-square block " +
                                        std::to_string(b.rows()) + "x" +
                                        std::to_string(b.cols()));
        }
        n += b.rows();
    }
    Matrix out(n, n);
    std::size_t off = 0;
    for (const Matrix& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    return out;
}

double hs_norm(const Matrix& a) {
    double acc = 0.0;
    for (double x : a.data()) acc += x * x;
    return std::sqrt(acc);
}

bool is_doubly_stochastic(const Matrix& a, double tol) {
    if (!a.is_square()) return false;
    std::size_t n = a.rows();
    for (double x : a.data()) {
        if (x < -tol) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double rs = 0.0, cs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            rs += a(i, j);
            cs += a(j, i);
        }
        if (std::fabs(rs - 1.0) > tol || std::fabs(cs - 1.0) > tol) return false;
    }
    return true;
}

void write_matrix_text(std::ostream& os, const Matrix& a) {
    os << a.rows() << ' ' << a.cols() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            if (j) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

Matrix read_matrix_text(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("matrix text: empty input", 1);
    std::istringstream header(line);
    long long rows = 0, cols = 0;
    if (!(header >> rows >> cols) || rows <= 0 || cols <= 0) {
        throw ParseError("matrix text: header must be 'rows cols' with positive counts", 1);
    }
    std::string trailing;
    if (header >> trailing) {
        throw ParseError("matrix text: unexpected token '" + trailing + "' in header", 1);
    }

    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(rows * cols));
    for (long long i = 0; i < rows; ++i) {
        std::size_t lineno = static_cast<std::size_t>(i) + 2;
        if (!std::getline(is, line)) {
            throw ParseError("matrix text: expected " + std::to_string(rows) +
                             " rows, file ends early", lineno);
        }
        std::istringstream row(line);
        for (long long j = 0; j < cols; ++j) {
            double x = 0.0;
            if (!(row >> x)) {
                throw ParseError("matrix text: row has fewer than " + std::to_string(cols) +
                                 " entries", lineno);
            }
            if (!std::isfinite(x)) {
                throw ParseError("matrix text: non-finite entry", lineno);
            }
            entries.push_back(x);
        }
        if (row >> trailing) {
            throw ParseError("matrix text: unexpected token '" + trailing + "' after " +
                             std::to_string(cols) + " entries", lineno);
        }
    }
    return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                  std::move(entries));
}

void save_matrix_text(const std::string& path, const Matrix& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_matrix_text(out, a);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix load_matrix_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_matrix_text(in);
}

} // namespace warpineq
