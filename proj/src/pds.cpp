#include "mprk/pds.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mprk/errors.hpp"

namespace mprk {

namespace {

void require_square(const Matrix& m, std::size_t n, const char* what) {
    if (m.rows() != n || m.cols() != n) {
        std::ostringstream os;
        os << what << " evaluator returned a " << m.rows() << "x" << m.cols()
           << " matrix, expected " << n << "x" << n;
        throw std::invalid_argument(os.str());
    }
}

void require_two_dimensional(std::span<const double> y0) {
    if (y0.size() != 2) throw std::invalid_argument("test problem state must have two components");
}

}  // namespace

PdsSystem::PdsSystem(std::size_t dimension, RateFunction production, RateFunction destruction,
                     const ConservationCheck& check)
    : dimension_(dimension),
      production_(std::move(production)),
      destruction_(std::move(destruction)) {
    if (dimension_ == 0) throw std::invalid_argument("PdsSystem: dimension must be positive");
    if (!production_ || !destruction_) throw std::invalid_argument("PdsSystem: empty rate evaluator");

    std::mt19937_64 rng(check.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector y(dimension_);
    for (std::size_t s = 0; s < check.samples; ++s) {
        // 1 - U[0,1) lies in (0,1], so y lies in (0, upper]^N.
        for (auto& v : y) v = check.upper * (1.0 - unit(rng));
        const Matrix p = this->production(y);
        const Matrix d = this->destruction(y);
        for (std::size_t i = 0; i < dimension_; ++i) {
            for (std::size_t j = 0; j < dimension_; ++j) {
                if (p(i, j) < 0.0 || d(i, j) < 0.0) {
                    throw std::invalid_argument("PdsSystem: negative production or destruction rate");
                }
                if (std::abs(p(i, j) - d(j, i)) > check.tolerance) {
                    std::ostringstream os;
                    os << "PdsSystem: not conservative, p_" << i + 1 << j + 1 << " != d_" << j + 1
                       << i + 1 << " at a sampled state";
                    throw std::invalid_argument(os.str());
                }
            }
        }
    }
}

Matrix PdsSystem::production(std::span<const double> y) const {
    if (y.size() != dimension_) throw std::invalid_argument("PdsSystem: state has wrong dimension");
    Matrix p = production_(y);
    require_square(p, dimension_, "production");
    return p;
}

Matrix PdsSystem::destruction(std::span<const double> y) const {
    if (y.size() != dimension_) throw std::invalid_argument("PdsSystem: state has wrong dimension");
    Matrix d = destruction_(y);
    require_square(d, dimension_, "destruction");
    return d;
}

Vector PdsSystem::net_rate(std::span<const double> y) const {
    const Matrix p = production(y);
    const Matrix d = destruction(y);
    Vector f(dimension_, 0.0);
    for (std::size_t i = 0; i < dimension_; ++i) {
        for (std::size_t j = 0; j < dimension_; ++j) f[i] += p(i, j) - d(i, j);
    }
    return f;
}

double LinearInvariant::evaluate(std::span<const double> y) const {
    if (y.size() != weights.size()) throw std::invalid_argument("LinearInvariant: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += weights[i] * y[i];
    return s;
}

LinearInvariant mass_invariant(std::span<const double> y0) {
    LinearInvariant inv{Vector(y0.size(), 1.0), 0.0};
    inv.value = inv.evaluate(y0);
    return inv;
}

void require_positive(std::span<const double> y, const char* what) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
            std::ostringstream os;
            os << what << ": component " << i + 1 << " = " << y[i] << " is not positive";
            throw DomainError(os.str());
        }
    }
}

Vector rhs(const PdsSystem& pds, std::span<const double> y) {
    require_positive(y, "rhs");
    return pds.net_rate(y);
}

PdsSystem make_test_problem() {
    auto production = [](std::span<const double> y) {
        Matrix p(2, 2);
        p(0, 1) = y[1] * y[1];
        p(1, 0) = y[0] * y[0];
        return p;
    };
    auto destruction = [](std::span<const double> y) {
        Matrix d(2, 2);
        d(0, 1) = y[0] * y[0];
        d(1, 0) = y[1] * y[1];
        return d;
    };
    return PdsSystem(2, production, destruction);
}

StateVector analytic_solution(std::span<const double> y0, double t) {
    require_two_dimensional(y0);
    require_positive(y0, "analytic_solution");
    if (!(t >= 0.0)) throw DomainError("analytic_solution: time must be nonnegative");
    // Same closed form rearranged as a convex combination of y0 and swap(y0):
    // y_i = (1 + e)/2 y0_i + (1 - e)/2 y0_j with e = exp(-2 mass t).
    const double mass = y0[0] + y0[1];
    const double keep = 0.5 * (1.0 + std::exp(-2.0 * mass * t));
    const double swap = -0.5 * std::expm1(-2.0 * mass * t);
    return {keep * y0[0] + swap * y0[1], keep * y0[1] + swap * y0[0]};
}

SteadyState steady_state(std::span<const double> y0) {
    require_two_dimensional(y0);
    require_positive(y0, "steady_state");
    const double c = 0.5 * (y0[0] + y0[1]);
    return {{c, c}, c};
}

}  // namespace mprk
