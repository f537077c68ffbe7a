#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mprk {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sizes here are tiny (N = 2 for the shipped
/// problem), so there is no expression-template or sparsity machinery.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Pivots with magnitude below this are treated as exact zeros.
inline constexpr double kSingularPivot = 1e-300;

/// Solves M x = b by Gaussian elimination with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below kSingularPivot and
/// std::invalid_argument on shape mismatch.
Vector solve_linear(const Matrix& m, std::span<const double> b);

/// Gaussian elimination for a Z-matrix (off-diagonal entries <= 0) whose
/// column sums are given and positive, i.e. a column diagonally dominant
/// M-matrix. The diagonal of `m` is not read: every diagonal entry, of `m`
/// and of each Schur complement, is rebuilt as the column sum plus the
/// magnitudes of the off-diagonal entries. All updates then add terms of one
/// sign, so there is no cancellation even when the off-diagonal entries are
/// huge. Partial pivoting would never swap rows on such a matrix.
/// Throws std::invalid_argument if the sign structure does not hold.
Vector solve_zmatrix(const Matrix& m, std::span<const double> column_sums, std::span<const double> b);

/// Solves M X = B column by column.
Matrix solve_linear(const Matrix& m, const Matrix& b);

Matrix inverse(const Matrix& m);

double norm_inf(std::span<const double> x);
double norm_inf(const Matrix& m);
double norm2(std::span<const double> x);
double sum(std::span<const double> x);

/// Entrywise max |a_ij - b_ij|.
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace mprk
