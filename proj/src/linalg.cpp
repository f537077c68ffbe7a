#include "mprk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "mprk/errors.hpp"

namespace mprk {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("Matrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("Matrix: shape mismatch in +=");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("Matrix: shape mismatch in -=");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("Matrix: shape mismatch in product");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("Matrix: shape mismatch in matrix-vector product");
    }
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    }
    return y;
}

Vector solve_linear(const Matrix& m, std::span<const double> b) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("solve_linear: matrix is not square");
    if (b.size() != n) throw std::invalid_argument("solve_linear: right-hand side has wrong length");

    Matrix a = m;
    Vector x(b.begin(), b.end());

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        }
        if (!(std::abs(a(p, k)) >= kSingularPivot)) {
            throw SingularMatrixError("solve_linear: singular matrix (pivot below 1e-300)");
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(x[k], x[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / a(k, k);
            if (factor == 0.0) continue;
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
            x[i] -= factor * x[k];
        }
    }

    for (std::size_t k = n; k-- > 0;) {
        double s = x[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

Vector solve_zmatrix(const Matrix& m, std::span<const double> column_sums, std::span<const double> b) {
    const std::size_t n = m.rows();
    if (m.cols() != n || column_sums.size() != n || b.size() != n) {
        throw std::invalid_argument("solve_zmatrix: shape mismatch");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!(column_sums[j] > 0.0)) throw std::invalid_argument("solve_zmatrix: column sums must be positive");
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j && !(m(i, j) <= 0.0)) {
                throw std::invalid_argument("solve_zmatrix: off-diagonal entries must be nonpositive");
            }
        }
    }

    Matrix a = m;
    Vector e(column_sums.begin(), column_sums.end());
    Vector x(b.begin(), b.end());

    auto rebuild_diagonal = [&](std::size_t j, std::size_t from_row) {
        double d = e[j];
        for (std::size_t i = from_row; i < n; ++i) {
            if (i != j) d -= a(i, j);
        }
        a(j, j) = d;
    };

    for (std::size_t k = 0; k < n; ++k) {
        rebuild_diagonal(k, k);
        const double pivot = a(k, k);
        for (std::size_t j = k + 1; j < n; ++j) e[j] -= e[k] * a(k, j) / pivot;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / pivot;
            if (factor == 0.0) continue;
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                if (j != i) a(i, j) -= factor * a(k, j);
            }
            x[i] -= factor * x[k];
        }
    }

    for (std::size_t k = n; k-- > 0;) {
        double s = x[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

Matrix solve_linear(const Matrix& m, const Matrix& b) {
    if (b.rows() != m.rows()) throw std::invalid_argument("solve_linear: right-hand side has wrong shape");
    Matrix x(m.cols(), b.cols());
    Vector column(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) column[i] = b(i, j);
        const Vector sol = solve_linear(m, column);
        for (std::size_t i = 0; i < sol.size(); ++i) x(i, j) = sol[i];
    }
    return x;
}

Matrix inverse(const Matrix& m) { return solve_linear(m, Matrix::identity(m.rows())); }

double norm_inf(std::span<const double> x) {
    double r = 0.0;
    for (double v : x) r = std::max(r, std::abs(v));
    return r;
}

double norm_inf(const Matrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (double v : m.row(i)) s += std::abs(v);
        r = std::max(r, s);
    }
    return r;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double r = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r = std::max(r, std::abs(a(i, j) - b(i, j)));
    }
    return r;
}

}  // namespace mprk
