#include "mprk/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mprk/errors.hpp"

namespace mprk {

namespace {

// B = [[-1, 1], [1, -1]]
Matrix coupling() { return Matrix{{-1.0, 1.0}, {1.0, -1.0}}; }

}  // namespace

StepMap one_step_map(PdsSystem pds, SchemeConfig cfg) {
    return [pds = std::move(pds), cfg](std::span<const double> y) {
        return mprk22_step(pds, y, cfg).y_next;
    };
}

std::string_view to_string(Classification c) noexcept {
    switch (c) {
        case Classification::stable: return "stable";
        case Classification::unstable: return "unstable";
        case Classification::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Matrix jacobian_fd(const StepMap& step, std::span<const double> y_star, std::optional<double> h) {
    require_positive(y_star, "jacobian_fd");
    if (h && !(*h > 0.0)) throw DomainError("jacobian_fd: step h must be positive");

    const std::size_t n = y_star.size();
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    Matrix jac(n, n);
    Vector plus(y_star.begin(), y_star.end());
    Vector minus(y_star.begin(), y_star.end());

    for (std::size_t j = 0; j < n; ++j) {
        double hj = h ? *h : base * std::max(1.0, std::abs(y_star[j]));
        int halvings = 0;
        while (!(y_star[j] - hj > 0.0)) {
            hj *= 0.5;
            if (++halvings > 200 || hj == 0.0) {
                throw DomainError("jacobian_fd: no admissible step keeps the perturbed state positive");
            }
        }
        plus[j] = y_star[j] + hj;
        minus[j] = y_star[j] - hj;
        const StateVector gp = step(plus);
        const StateVector gm = step(minus);
        if (gp.size() != n || gm.size() != n) {
            throw std::invalid_argument("jacobian_fd: step map changed the dimension");
        }
        for (std::size_t i = 0; i < n; ++i) jac(i, j) = (gp[i] - gm[i]) / (2.0 * hj);
        plus[j] = y_star[j];
        minus[j] = y_star[j];
    }
    return jac;
}

JacobianBlocks closed_form_blocks(double c, double dt, double alpha) {
    if (!(c > 0.0)) throw DomainError("closed_form_blocks: c must be positive");
    if (!(dt >= 0.0)) throw DomainError("closed_form_blocks: dt must be nonnegative");
    if (!(alpha >= 0.5)) throw DomainError("closed_form_blocks: alpha must be >= 1/2");

    const Matrix id = Matrix::identity(2);
    const Matrix b = coupling();
    const double s = dt * c;

    JacobianBlocks blocks;
    blocks.dn_phi2 = id + (alpha * s) * b;
    blocks.d2_phi2 = -id + (alpha * s) * b;
    blocks.dn_phi_np1 = id + s * b;
    blocks.d2_phi_np1 = Matrix(2, 2);
    blocks.dnp1_phi_np1 = -id + s * b;
    return blocks;
}

Matrix assemble_dg(const JacobianBlocks& blocks) {
    Matrix stage_sensitivity;
    try {
        stage_sensitivity = solve_linear(blocks.d2_phi2, blocks.dn_phi2);
    } catch (const SingularMatrixError& e) {
        throw AssemblyError("D2_Phi2", std::string("assemble_dg: D2_Phi2 is singular: ") + e.what());
    }
    const Matrix inner = blocks.dn_phi_np1 - blocks.d2_phi_np1 * stage_sensitivity;
    try {
        return -solve_linear(blocks.dnp1_phi_np1, inner);
    } catch (const SingularMatrixError& e) {
        throw AssemblyError("Dnp1_Phi_np1",
                            std::string("assemble_dg: Dnp1_Phi_np1 is singular: ") + e.what());
    }
}

Matrix dg_closed_form(double c, double dt) {
    if (!(c > 0.0)) throw DomainError("dg_closed_form: c must be positive");
    if (!(dt >= 0.0)) throw DomainError("dg_closed_form: dt must be nonnegative");
    const double z = 2.0 * dt * c;
    const double scale = 1.0 / (z + 1.0);
    return Matrix{{scale, scale * z}, {scale * z, scale}};
}

double stability_function(double z) {
    if (!(z >= 0.0)) throw DomainError("stability_function: z must be nonnegative");
    if (std::isinf(z)) return -1.0;
    return (1.0 - z) / (1.0 + z);
}

StabilityReport spectral_analysis(const Matrix& dg, const LinearInvariant& invariant,
                                  const SpectralOptions& options) {
    if (dg.rows() != 2 || dg.cols() != 2) {
        throw UnsupportedMatrixError("spectral_analysis: only 2x2 Jacobians are supported");
    }
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            if (!std::isfinite(dg(i, j))) throw UnsupportedMatrixError("spectral_analysis: non-finite entry");
        }
    }
    if (std::abs(dg(0, 1) - dg(1, 0)) > options.symmetry_tol) {
        std::ostringstream os;
        os << "spectral_analysis: asymmetry " << std::abs(dg(0, 1) - dg(1, 0))
           << " exceeds " << options.symmetry_tol << "; only symmetric matrices are supported";
        throw UnsupportedMatrixError(os.str());
    }
    if (invariant.weights.size() != 2 || norm_inf(invariant.weights) == 0.0) {
        throw std::invalid_argument("spectral_analysis: invariant must be a nonzero 2-vector");
    }

    StabilityReport r;
    r.dg = dg;

    const double off = 0.5 * (dg(0, 1) + dg(1, 0));
    const double mean = 0.5 * (dg(0, 0) + dg(1, 1));
    const double half_gap = 0.5 * (dg(0, 0) - dg(1, 1));
    const double radius = std::hypot(half_gap, off);
    r.eigenvalues = {mean + radius, mean - radius};

    const Vector& v = invariant.weights;
    r.invariant_eigenvector = v;
    r.transverse_eigenvector = {v[1], -v[0]};

    const Vector dv = dg * std::span<const double>(v);
    r.invariant_residual = std::max(std::abs(dv[0] - v[0]), std::abs(dv[1] - v[1])) / norm_inf(v);

    const Vector& w = r.transverse_eigenvector;
    const Vector dw = dg * std::span<const double>(w);
    r.transverse_eigenvalue = (w[0] * dw[0] + w[1] * dw[1]) / (w[0] * w[0] + w[1] * w[1]);

    const double modulus = std::abs(r.transverse_eigenvalue);
    if (r.invariant_residual > options.invariant_tol) {
        r.classification = Classification::inconclusive;
    } else if (modulus < 1.0 - options.dead_band) {
        r.classification = Classification::stable;
    } else if (modulus > 1.0 + options.dead_band) {
        r.classification = Classification::unstable;
    } else {
        r.classification = Classification::inconclusive;
    }
    return r;
}

double ProbeResult::asymptotic_ratio() const {
    if (ratios.empty()) throw std::logic_error("ProbeResult: no contraction ratios recorded");
    const double cutoff = 1e-9 * std::max(1.0, distances.front());
    double best = ratios.back();
    for (std::size_t n = 0; n < ratios.size(); ++n) {
        if (distances[n] >= cutoff) best = ratios[n];
    }
    return best;
}

std::optional<std::size_t> ProbeResult::steps_to(double tol) const {
    for (std::size_t n = 0; n < distances.size(); ++n) {
        if (distances[n] < tol) return n;
    }
    return std::nullopt;
}

ProbeResult local_convergence_probe(const PdsSystem& pds, const SteadyState& steady, double delta,
                                    const SchemeConfig& cfg, std::size_t n_max) {
    if (pds.dimension() != 2 || steady.y_star.size() != 2) {
        throw std::invalid_argument("local_convergence_probe: two-dimensional systems only");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw DomainError("local_convergence_probe: delta must be positive");
    }
    const Vector& y_star = steady.y_star;
    require_positive(y_star, "local_convergence_probe");
    StateVector y = {y_star[0] + delta, y_star[1] - delta};
    require_positive(y, "local_convergence_probe: perturbed start");

    auto distance = [&](std::span<const double> x) {
        const double e0 = x[0] - y_star[0];
        const double e1 = x[1] - y_star[1];
        return std::hypot(e0, e1);
    };
    const double rounding_floor = 8.0 * std::numeric_limits<double>::epsilon() * norm_inf(y_star);
    const double blow_up = 1.0 / delta;

    ProbeResult result;
    result.distances.push_back(distance(y));
    for (std::size_t n = 0; n < n_max; ++n) {
        y = mprk22_step(pds, y, cfg).y_next;
        const double d = distance(y);
        if (!std::isfinite(d) || d > blow_up) {
            std::ostringstream os;
            os << "local_convergence_probe: deviation " << d << " exceeded 1/delta after " << n + 1
               << " steps";
            throw ProbeFailure(os.str());
        }
        result.ratios.push_back(d / result.distances.back());
        result.distances.push_back(d);
        if (d <= rounding_floor) break;
    }
    return result;
}

}  // namespace mprk
