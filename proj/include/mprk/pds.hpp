#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "mprk/linalg.hpp"

namespace mprk {

/// State variables y_1..y_N.
using StateVector = Vector;

/// Evaluates an N x N matrix of rates (p_ij or d_ij) at a state.
using RateFunction = std::function<Matrix(std::span<const double>)>;

/// Sampling parameters for the construction-time check of a user supplied
/// system: nonnegativity and p_ij(y) = d_ji(y) at random points in (0, upper]^N.
struct ConservationCheck {
    std::size_t samples = 100;
    double upper = 10.0;
    double tolerance = 1e-12;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Conservative production-destruction system
///   y_i' = sum_j (p_ij(y) - d_ij(y)),  p_ij = d_ji >= 0.
///
/// The rate evaluators are black boxes, so conservativity and nonnegativity
/// are checked by sampling at construction (std::invalid_argument on failure).
class PdsSystem {
public:
    PdsSystem(std::size_t dimension, RateFunction production, RateFunction destruction,
              const ConservationCheck& check = {});

    std::size_t dimension() const noexcept { return dimension_; }

    Matrix production(std::span<const double> y) const;
    Matrix destruction(std::span<const double> y) const;

    /// f_i(y) = sum_j (p_ij - d_ij) without any domain check. Explicit
    /// Runge-Kutta stages may leave the positive orthant and still need f.
    Vector net_rate(std::span<const double> y) const;

private:
    std::size_t dimension_;
    RateFunction production_;
    RateFunction destruction_;
};

/// Positive steady state y* = c * (1, ..., 1).
struct SteadyState {
    StateVector y_star;
    double c = 0.0;
};

/// Linear invariant n . y with value n . y0 (the k = 1 case: a single
/// left-kernel vector).
struct LinearInvariant {
    Vector weights;
    double value = 0.0;

    double evaluate(std::span<const double> y) const;
};

/// The total mass invariant n = (1, ..., 1) with value sum(y0).
LinearInvariant mass_invariant(std::span<const double> y0);

/// Throws DomainError unless every component of y is finite and > 0.
void require_positive(std::span<const double> y, const char* what);

/// Right-hand side f(y); requires y > 0.
Vector rhs(const PdsSystem& pds, std::span<const double> y);

/// y1' = y2^2 - y1^2, y2' = y1^2 - y2^2 written as p_ij = d_ji = y_j^2 (i != j).
PdsSystem make_test_problem();

/// Closed-form solution of the test problem:
///   y(t) = c 1 + (y0 - swap(y0)) / 2 * exp(-2 (y1_0 + y2_0) t),  c = (y1_0 + y2_0) / 2.
StateVector analytic_solution(std::span<const double> y0, double t);

/// Limit of analytic_solution as t -> infinity.
SteadyState steady_state(std::span<const double> y0);

}  // namespace mprk
