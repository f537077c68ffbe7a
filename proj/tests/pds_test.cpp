#include "mprk/pds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mprk/errors.hpp"

using mprk::Matrix;
using mprk::Vector;

namespace {

const mprk::PdsSystem& test_problem() {
    static const mprk::PdsSystem pds = mprk::make_test_problem();
    return pds;
}

}  // namespace

TEST(Rhs, SteadyStateIsZero) {
    const Vector f = mprk::rhs(test_problem(), Vector{1.0, 1.0});
    EXPECT_EQ(f[0], 0.0);
    EXPECT_EQ(f[1], 0.0);
}

TEST(Rhs, HandEvaluatedPoints) {
    Vector f = mprk::rhs(test_problem(), Vector{2.0, 1.0});
    EXPECT_EQ(f[0], -3.0);
    EXPECT_EQ(f[1], 3.0);

    f = mprk::rhs(test_problem(), Vector{9.98, 0.02});
    EXPECT_DOUBLE_EQ(f[0], 0.02 * 0.02 - 9.98 * 9.98);
    EXPECT_DOUBLE_EQ(f[1], 9.98 * 9.98 - 0.02 * 0.02);
}

TEST(Rhs, NonpositiveStateIsDomainError) {
    EXPECT_THROW(mprk::rhs(test_problem(), Vector{0.0, 1.0}), mprk::DomainError);
    EXPECT_THROW(mprk::rhs(test_problem(), Vector{1.0, -2.0}), mprk::DomainError);
    EXPECT_THROW(mprk::rhs(test_problem(), Vector{1.0, NAN}), mprk::DomainError);
}

TEST(TestProblem, ProductionMatrix) {
    const Matrix p = test_problem().production(Vector{3.0, 1.0});
    EXPECT_EQ(p(0, 1), 1.0);
    EXPECT_EQ(p(1, 0), 9.0);
    EXPECT_EQ(p(0, 0), 0.0);
    EXPECT_EQ(p(1, 1), 0.0);
}

TEST(TestProblem, ConservativeAtSamplePoint) {
    const Vector y{0.5, 2.0};
    const Matrix p = test_problem().production(y);
    const Matrix d = test_problem().destruction(y);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(p(i, j), d(j, i));
    }
}

TEST(PdsSystem, RejectsNonConservativeRates) {
    auto p = [](std::span<const double> y) { return Matrix{{0.0, y[1]}, {y[0], 0.0}}; };
    auto d = [](std::span<const double> y) { return Matrix{{0.0, 2.0 * y[0]}, {y[1], 0.0}}; };
    EXPECT_THROW(mprk::PdsSystem(2, p, d), std::invalid_argument);
}

TEST(PdsSystem, RejectsNegativeRates) {
    auto p = [](std::span<const double> y) { return Matrix{{0.0, y[1] - 5.0}, {y[0], 0.0}}; };
    auto d = [](std::span<const double> y) { return Matrix{{0.0, y[0]}, {y[1] - 5.0, 0.0}}; };
    EXPECT_THROW(mprk::PdsSystem(2, p, d), std::invalid_argument);
}

TEST(PdsSystem, RejectsWrongShape) {
    auto p = [](std::span<const double>) { return Matrix(3, 3); };
    EXPECT_THROW(mprk::PdsSystem(2, p, p), std::invalid_argument);
}

TEST(AnalyticSolution, InitialCondition) {
    const Vector y = mprk::analytic_solution(Vector{9.98, 0.02}, 0.0);
    EXPECT_EQ(y[0], 9.98);
    EXPECT_EQ(y[1], 0.02);
}

TEST(AnalyticSolution, LongTimeLimit) {
    const Vector y = mprk::analytic_solution(Vector{9.98, 0.02}, 1e3);
    EXPECT_EQ(y[0], 5.0);
    EXPECT_EQ(y[1], 5.0);
}

TEST(AnalyticSolution, HandEvaluatedAtOneTwentieth) {
    // 2 (y1 + y2) t = 2 * 10 * 0.05 = 1
    const Vector y = mprk::analytic_solution(Vector{9.98, 0.02}, 0.05);
    EXPECT_NEAR(y[0], 5.0 + 4.98 * std::exp(-1.0), 1e-14);
    EXPECT_NEAR(y[1], 5.0 - 4.98 * std::exp(-1.0), 1e-14);
}

TEST(AnalyticSolution, DomainErrors) {
    EXPECT_THROW(mprk::analytic_solution(Vector{0.0, 1.0}, 1.0), mprk::DomainError);
    EXPECT_THROW(mprk::analytic_solution(Vector{1.0, 1.0}, -1.0), mprk::DomainError);
    EXPECT_THROW(mprk::analytic_solution(Vector{1.0, 1.0, 1.0}, 1.0), std::invalid_argument);
}

TEST(SteadyState, Examples) {
    auto s = mprk::steady_state(Vector{9.98, 0.02});
    EXPECT_EQ(s.c, 5.0);
    EXPECT_EQ(s.y_star, (Vector{5.0, 5.0}));

    s = mprk::steady_state(Vector{1.0, 1.0});
    EXPECT_EQ(s.c, 1.0);

    s = mprk::steady_state(Vector{3.0, 1.0});
    EXPECT_EQ(s.c, 2.0);
    EXPECT_EQ(s.y_star, (Vector{2.0, 2.0}));

    EXPECT_THROW(mprk::steady_state(Vector{-1.0, 3.0}), mprk::DomainError);
}

TEST(MassInvariant, WeightsAndValue) {
    const auto inv = mprk::mass_invariant(Vector{9.98, 0.02});
    EXPECT_EQ(inv.weights, (Vector{1.0, 1.0}));
    EXPECT_DOUBLE_EQ(inv.value, 10.0);
}

// Property checks on randomized states.

class PdsProperties : public ::testing::Test {
protected:
    static constexpr std::uint64_t kSeed = 20221015;
    std::mt19937_64 rng{kSeed};
    std::uniform_real_distribution<double> positive{1e-3, 10.0};
};

TEST_F(PdsProperties, RhsComponentsSumToZero) {
    for (int k = 0; k < 1000; ++k) {
        const Vector y{positive(rng), positive(rng)};
        const Vector f = mprk::rhs(test_problem(), y);
        const double l1 = std::abs(f[0]) + std::abs(f[1]);
        ASSERT_LE(std::abs(f[0] + f[1]), 1e-15 * l1) << "seed " << kSeed;
    }
}

TEST_F(PdsProperties, AnalyticSolutionSolvesTheOde) {
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
        const Vector y0{positive(rng), positive(rng)};
        const double mass = y0[0] + y0[1];
        for (double t : {0.0, 0.01, 0.05, 0.1, 0.3}) {
            // Central differences need t - h >= 0.
            const double tc = t + h;
            const Vector yp = mprk::analytic_solution(y0, tc + h);
            const Vector ym = mprk::analytic_solution(y0, tc - h);
            const Vector f = mprk::rhs(test_problem(), mprk::analytic_solution(y0, tc));
            for (std::size_t i = 0; i < 2; ++i) {
                const double deriv = (yp[i] - ym[i]) / (2.0 * h);
                // Truncation ~ h^2 |y'''| / 6 with |y'''| <= |y0_1 - y0_2| (2 mass)^3 / 2.
                const double tol = h * h * std::abs(y0[0] - y0[1]) * std::pow(2.0 * mass, 3) / 6.0 +
                                   1e-9 * (1.0 + std::abs(f[i]));
                ASSERT_NEAR(deriv, f[i], tol) << "y0=(" << y0[0] << "," << y0[1] << ") t=" << tc;
            }
        }
    }
}

TEST_F(PdsProperties, MassIsInvariantAlongTheSolution) {
    for (int k = 0; k < 200; ++k) {
        const Vector y0{positive(rng), positive(rng)};
        const auto inv = mprk::mass_invariant(y0);
        for (double t : {0.0, 1e-3, 0.1, 1.0, 100.0}) {
            const Vector y = mprk::analytic_solution(y0, t);
            ASSERT_NEAR(inv.evaluate(y), inv.value, 1e-13 * inv.value);
        }
    }
}

TEST_F(PdsProperties, MonotoneApproachToSteadyState) {
    for (int k = 0; k < 200; ++k) {
        const Vector y0{positive(rng), positive(rng)};
        if (y0[0] == y0[1]) continue;
        const auto s = mprk::steady_state(y0);
        const double rate = 2.0 * (y0[0] + y0[1]);
        double previous = INFINITY;
        // Stop before the deviation underflows relative to c.
        for (double t = 0.0; rate * t < 20.0; t += 0.5 / rate) {
            const Vector y = mprk::analytic_solution(y0, t);
            const double dist = std::hypot(y[0] - s.c, y[1] - s.c);
            ASSERT_LT(dist, previous);
            previous = dist;
        }
    }
}
