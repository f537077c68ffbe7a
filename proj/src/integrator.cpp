#include "mprk/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "mprk/errors.hpp"

namespace mprk {

SchemeConfig::SchemeConfig(double alpha, double dt) : alpha_(alpha), dt_(dt) {
    if (!(alpha >= 0.5) || !std::isfinite(alpha)) throw DomainError("SchemeConfig: alpha must be >= 1/2");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("SchemeConfig: dt must be positive");
}

namespace {

void require_dimension(const PdsSystem& pds, std::span<const double> y) {
    if (y.size() != pds.dimension()) throw std::invalid_argument("state has wrong dimension");
}

// Patankar system  M x = y_n  with
//   M_ii = 1 + scale (sum_j d_ij - p_ii) / w_i,   M_ij = -scale p_ij / w_j.
// Column j sums to 1 + scale sum_k (d_jk - p_kj) / w_j, which is exactly 1
// for conservative rates, hence sum(x) = sum(y_n).
StateVector solve_patankar(const Matrix& p, const Matrix& d, std::span<const double> weights, double scale,
                           std::span<const double> rhs) {
    const std::size_t n = weights.size();
    Matrix m(n, n);
    Vector column_sums(n);
    bool z_matrix = true;
    for (std::size_t i = 0; i < n; ++i) {
        double loss = 0.0;
        double excess = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            loss += d(i, j);
            excess += d(i, j) - p(j, i);
        }
        m(i, i) = 1.0 + scale * (loss - p(i, i)) / weights[i];
        column_sums[i] = 1.0 + scale * excess / weights[i];
        if (!(column_sums[i] > 0.0)) z_matrix = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) m(i, j) = -scale * p(i, j) / weights[j];
        }
    }
    if (z_matrix) return solve_zmatrix(m, column_sums, rhs);
    return solve_linear(m, rhs);
}

}  // namespace

StateVector mprk22_stage2(const PdsSystem& pds, std::span<const double> y_n, const SchemeConfig& cfg) {
    require_dimension(pds, y_n);
    require_positive(y_n, "mprk22_stage2");
    return solve_patankar(pds.production(y_n), pds.destruction(y_n), y_n, cfg.alpha() * cfg.dt(), y_n);
}

StateVector mprk22_update(const PdsSystem& pds, std::span<const double> y_n,
                          std::span<const double> y_stage2, const SchemeConfig& cfg) {
    require_dimension(pds, y_n);
    require_dimension(pds, y_stage2);
    require_positive(y_n, "mprk22_update");
    require_positive(y_stage2, "mprk22_update");

    const double inv_alpha = 1.0 / cfg.alpha();
    const double w2 = 0.5 * inv_alpha;
    const double w1 = 1.0 - w2;

    Matrix p = w1 * pds.production(y_n) + w2 * pds.production(y_stage2);
    Matrix d = w1 * pds.destruction(y_n) + w2 * pds.destruction(y_stage2);

    Vector sigma(y_n.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        sigma[j] = std::pow(y_stage2[j], inv_alpha) * std::pow(y_n[j], 1.0 - inv_alpha);
    }
    return solve_patankar(p, d, sigma, cfg.dt(), y_n);
}

StepState mprk22_step(const PdsSystem& pds, std::span<const double> y_n, const SchemeConfig& cfg) {
    StepState s;
    s.y_n.assign(y_n.begin(), y_n.end());
    s.y_stage2 = mprk22_stage2(pds, y_n, cfg);
    s.y_next = mprk22_update(pds, y_n, s.y_stage2, cfg);
    return s;
}

Trajectory integrate(const PdsSystem& pds, std::span<const double> y0, const SchemeConfig& cfg,
                     double t_end, const ReferenceSolution& reference) {
    require_dimension(pds, y0);
    require_positive(y0, "integrate");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("integrate: t_end must be positive");

    const double dt = cfg.dt();
    // Steps whose end lies within a tiny fraction of dt of t_end are treated
    // as landing on it, so 0.1 / 0.02 gives five full steps, not six.
    const double slack = 1e-9;
    auto full_steps = static_cast<std::size_t>(std::floor(t_end / dt + slack));
    const bool truncated = t_end - static_cast<double>(full_steps) * dt > slack * dt;
    const std::size_t n_steps = full_steps + (truncated ? 1 : 0);

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);

    auto record = [&](double t, StateVector y) {
        if (reference) {
            const StateVector exact = reference(t);
            Vector err(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) err[i] = std::abs(y[i] - exact[i]);
            traj.errors.push_back(std::move(err));
        }
        traj.times.push_back(t);
        traj.states.push_back(std::move(y));
    };

    record(0.0, StateVector(y0.begin(), y0.end()));
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t_prev = traj.times.back();
        const double t = (k == n_steps) ? t_end : static_cast<double>(k) * dt;
        const SchemeConfig step_cfg = cfg.with_dt(t - t_prev);
        StateVector y = mprk22_step(pds, traj.states.back(), step_cfg).y_next;
        record(t, std::move(y));
    }
    return traj;
}

Vector rk2_explicit_step(const PdsSystem& pds, std::span<const double> y_n, const SchemeConfig& cfg) {
    require_dimension(pds, y_n);
    require_positive(y_n, "rk2_explicit_step");
    const double a = cfg.alpha();
    const double dt = cfg.dt();
    const double w2 = 0.5 / a;
    const double w1 = 1.0 - w2;

    const Vector k1 = pds.net_rate(y_n);
    Vector stage(y_n.size());
    for (std::size_t i = 0; i < stage.size(); ++i) stage[i] = y_n[i] + a * dt * k1[i];
    const Vector k2 = pds.net_rate(stage);

    Vector y(y_n.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = y_n[i] + dt * (w1 * k1[i] + w2 * k2[i]);
    return y;
}

}  // namespace mprk
