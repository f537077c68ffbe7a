#include "mprk/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

#include "mprk/errors.hpp"

using mprk::Matrix;
using mprk::Vector;

TEST(SolveLinear, IdentityReturnsRightHandSide) {
    const Vector b = {3.5, -2.0, 7.25};
    EXPECT_EQ(mprk::solve_linear(Matrix::identity(3), b), b);
}

TEST(SolveLinear, StageTwoSystemOfTheTestProblem) {
    // 4a - b = 3, -3a + 2b = 1  =>  a = 7/5, b = 13/5
    const Matrix m{{4.0, -1.0}, {-3.0, 2.0}};
    const Vector x = mprk::solve_linear(m, Vector{3.0, 1.0});
    EXPECT_NEAR(x[0], 7.0 / 5.0, 1e-15);
    EXPECT_NEAR(x[1], 13.0 / 5.0, 1e-15);
}

TEST(SolveLinear, OneByOne) {
    const Vector x = mprk::solve_linear(Matrix{{2.0}}, Vector{6.0});
    EXPECT_EQ(x[0], 3.0);
}

TEST(SolveLinear, NeedsPivoting) {
    const Matrix m{{0.0, 1.0}, {1.0, 0.0}};
    const Vector x = mprk::solve_linear(m, Vector{2.0, 5.0});
    EXPECT_EQ(x[0], 5.0);
    EXPECT_EQ(x[1], 2.0);
}

TEST(SolveLinear, SingularMatrixThrows) {
    const Matrix m{{1.0, 2.0}, {2.0, 4.0}};
    EXPECT_THROW(mprk::solve_linear(m, Vector{1.0, 1.0}), mprk::SingularMatrixError);
    EXPECT_THROW(mprk::solve_linear(Matrix(2, 2), Vector{1.0, 1.0}), mprk::SingularMatrixError);
}

TEST(SolveLinear, ShapeMismatchThrows) {
    EXPECT_THROW(mprk::solve_linear(Matrix(2, 3), Vector{1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(mprk::solve_linear(Matrix::identity(2), Vector{1.0}), std::invalid_argument);
}

TEST(SolveLinear, ResidualBoundOnRandomSystems) {
    const std::uint64_t seed = 12345;
    RecordProperty("seed", std::to_string(seed));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    std::uniform_int_distribution<int> dim(1, 8);

    for (int trial = 0; trial < 500; ++trial) {
        const auto n = static_cast<std::size_t>(dim(rng));
        Matrix m(n, n);
        Vector b(n);
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = entry(rng);
            for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
            m(i, i) += 25.0;  // keep the draws comfortably nonsingular
        }
        const Vector x = mprk::solve_linear(m, b);
        Vector r = m * std::span<const double>(x);
        for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
        const double bound = 1e-12 * (mprk::norm_inf(m) * mprk::norm_inf(x) + mprk::norm_inf(b));
        ASSERT_LE(mprk::norm_inf(r), bound) << "seed " << seed << " trial " << trial;
    }
}

TEST(Matrix, InverseTimesMatrixIsIdentity) {
    const Matrix m{{2.0, 1.0}, {1.0, 3.0}};
    EXPECT_LE(mprk::max_abs_diff(mprk::inverse(m) * m, Matrix::identity(2)), 1e-15);
}

TEST(Matrix, Norms) {
    const Matrix m{{1.0, -2.0}, {-3.0, 0.5}};
    EXPECT_EQ(mprk::norm_inf(m), 3.5);
    EXPECT_EQ(mprk::norm_inf(Vector{1.0, -4.0}), 4.0);
    EXPECT_EQ(mprk::norm2(Vector{3.0, 4.0}), 5.0);
    EXPECT_EQ(mprk::sum(Vector{3.0, 4.0}), 7.0);
}

TEST(SolveZMatrix, AgreesWithPivotedEliminationOnRandomMMatrices) {
    const std::uint64_t seed = 777;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.0, 5.0);
    std::uniform_real_distribution<double> pos(0.1, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 6;
        Matrix m(n, n);
        Vector sums(n);
        Vector b(n);
        for (std::size_t j = 0; j < n; ++j) {
            sums[j] = pos(rng);
            b[j] = pos(rng);
            double off = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j) continue;
                m(i, j) = -mag(rng);
                off += m(i, j);
            }
            m(j, j) = sums[j] - off;
        }
        const Vector x = mprk::solve_zmatrix(m, sums, b);
        const Vector ref = mprk::solve_linear(m, b);
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_NEAR(x[i], ref[i], 1e-12 * (1.0 + std::abs(ref[i]))) << "seed " << seed << " trial " << trial;
            ASSERT_GT(x[i], 0.0);
        }
    }
}

TEST(SolveZMatrix, NoCancellationForHugeCoupling) {
    // [[1+s, -s], [-s, 1+s]] (c, c) = (c, c) for every s.
    for (double s : {1.0, 1e4, 1e8, 1e12}) {
        const Matrix m{{1.0 + s, -s}, {-s, 1.0 + s}};
        const Vector x = mprk::solve_zmatrix(m, Vector{1.0, 1.0}, Vector{3.0, 3.0});
        EXPECT_NEAR(x[0], 3.0, 4e-16 * 3.0) << "s=" << s;
        EXPECT_NEAR(x[1], 3.0, 4e-16 * 3.0) << "s=" << s;
    }
}

TEST(SolveZMatrix, RejectsWrongSignStructure) {
    EXPECT_THROW(mprk::solve_zmatrix(Matrix{{2.0, 1.0}, {-1.0, 2.0}}, Vector{1.0, 1.0}, Vector{1.0, 1.0}),
                 std::invalid_argument);
    EXPECT_THROW(mprk::solve_zmatrix(Matrix{{2.0, -1.0}, {-1.0, 2.0}}, Vector{0.0, 1.0}, Vector{1.0, 1.0}),
                 std::invalid_argument);
}
