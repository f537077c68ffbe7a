#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mprk/pds.hpp"

namespace mprk {

/// MPRK22(alpha) parameters. alpha >= 1/2 keeps the underlying Butcher
/// tableau weights nonnegative.
class SchemeConfig {
public:
    SchemeConfig(double alpha, double dt);

    double alpha() const noexcept { return alpha_; }
    double dt() const noexcept { return dt_; }

    SchemeConfig with_dt(double dt) const { return {alpha_, dt}; }

private:
    double alpha_;
    double dt_;
};

/// Intermediate and final values of one MPRK22 step.
struct StepState {
    StateVector y_n;
    StateVector y_stage2;
    StateVector y_next;
};

using ReferenceSolution = std::function<StateVector(double)>;

/// Fixed-step trajectory. errors[k][i] = |y_i(times[k]) numerically - reference|
/// when a reference solution was supplied, empty otherwise.
struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<Vector> errors;

    std::size_t size() const noexcept { return times.size(); }
    const StateVector& final_state() const { return states.back(); }
};

/// First Patankar stage: solves M y2 = y_n with
///   M_ii = 1 + alpha dt sum_j d_ij(y_n) / y_n_i,   M_ij = -alpha dt p_ij(y_n) / y_n_j.
StateVector mprk22_stage2(const PdsSystem& pds, std::span<const double> y_n, const SchemeConfig& cfg);

/// Second Patankar stage with weighted rates
///   r_ij = (1 - 1/(2 alpha)) rate_ij(y_n) + 1/(2 alpha) rate_ij(y2)
/// and Patankar denominators sigma_j = y2_j^(1/alpha) y_n_j^(1 - 1/alpha).
StateVector mprk22_update(const PdsSystem& pds, std::span<const double> y_n,
                          std::span<const double> y_stage2, const SchemeConfig& cfg);

/// One application of the MPRK22(alpha) map g.
StepState mprk22_step(const PdsSystem& pds, std::span<const double> y_n, const SchemeConfig& cfg);

/// Marches from t = 0 to t_end with step cfg.dt(); the last step is shortened
/// to land exactly on t_end when t_end is not a multiple of dt.
Trajectory integrate(const PdsSystem& pds, std::span<const double> y0, const SchemeConfig& cfg,
                     double t_end, const ReferenceSolution& reference = {});

/// Explicit two-stage Runge-Kutta step from the same tableau. Not positivity
/// preserving: the result may have negative components.
Vector rk2_explicit_step(const PdsSystem& pds, std::span<const double> y_n, const SchemeConfig& cfg);

}  // namespace mprk
