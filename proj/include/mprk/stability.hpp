#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mprk/integrator.hpp"
#include "mprk/linalg.hpp"
#include "mprk/pds.hpp"

namespace mprk {

/// A one-step map y^n -> y^{n+1}.
using StepMap = std::function<StateVector(std::span<const double>)>;

/// The MPRK22(alpha) map g for a given system and configuration. The
/// returned map holds references to neither argument.
StepMap one_step_map(PdsSystem pds, SchemeConfig cfg);

/// Partial derivatives of the stage residuals at a steady state of the test
/// problem. With u = y^n, v = y^(2), w = y^{n+1}:
///   Phi2(u, v)       = stage-2 equation,   Phi_np1(u, v, w) = update equation.
struct JacobianBlocks {
    Matrix dn_phi2;       // dPhi2/du
    Matrix d2_phi2;       // dPhi2/dv
    Matrix dn_phi_np1;    // dPhi_np1/du
    Matrix d2_phi_np1;    // dPhi_np1/dv
    Matrix dnp1_phi_np1;  // dPhi_np1/dw
};

enum class Classification { stable, unstable, inconclusive };

std::string_view to_string(Classification c) noexcept;

struct StabilityReport {
    Matrix dg;
    std::vector<double> eigenvalues;  // descending
    Vector invariant_eigenvector;
    Vector transverse_eigenvector;
    double transverse_eigenvalue = 0.0;
    double invariant_residual = 0.0;  // |dg v - v|_inf / |v|_inf along the invariant direction
    Classification classification = Classification::inconclusive;
};

struct SpectralOptions {
    double symmetry_tol = 1e-10;
    double invariant_tol = 1e-12;
    /// Half-width of the "inconclusive" band around |lambda| = 1.
    double dead_band = 1e-12;
};

/// Central-difference Jacobian of `step` at y_star. Column j uses
/// h_j = h or cbrt(eps) * max(1, |y_j|), halved until y_j - h_j > 0.
Matrix jacobian_fd(const StepMap& step, std::span<const double> y_star,
                   std::optional<double> h = std::nullopt);

/// Closed-form derivative blocks for the test problem at y* = c (1, 1).
/// dt = 0 is accepted as a limiting case.
JacobianBlocks closed_form_blocks(double c, double dt, double alpha);

/// Implicit-function-theorem assembly
///   Dg = -(D_{n+1} Phi_{n+1})^{-1} (D_n Phi_{n+1} - D_2 Phi_{n+1} (D_2 Phi_2)^{-1} D_n Phi_2).
/// Throws AssemblyError naming the block that could not be inverted.
Matrix assemble_dg(const JacobianBlocks& blocks);

/// Dg(y*) = 1/(2 dt c + 1) [[1, 2 dt c], [2 dt c, 1]], independent of alpha.
Matrix dg_closed_form(double c, double dt);

/// R(z) = (1 - z) / (1 + z), z >= 0.
double stability_function(double z);

/// Closed-form spectrum of a symmetric 2x2 Jacobian and the stability verdict
/// for the non-hyperbolic fixed point. The eigenvalue belonging to the
/// invariant direction must be 1; the verdict is taken from the transverse one.
StabilityReport spectral_analysis(const Matrix& dg, const LinearInvariant& invariant,
                                  const SpectralOptions& options = {});

struct ProbeResult {
    /// distances[n] = |y^n - y*|_2, starting with the initial perturbation.
    std::vector<double> distances;
    /// ratios[n] = distances[n + 1] / distances[n].
    std::vector<double> ratios;

    /// Contraction ratio measured once the deviation is small but still well
    /// above rounding level.
    double asymptotic_ratio() const;

    /// First n with distances[n] < tol.
    std::optional<std::size_t> steps_to(double tol) const;
};

/// Iterates g from y* + delta (1, -1), which stays on the invariant
/// hyperplane, and records the contraction of |y^n - y*|. Iteration stops
/// early once the deviation reaches rounding level.
ProbeResult local_convergence_probe(const PdsSystem& pds, const SteadyState& steady, double delta,
                                    const SchemeConfig& cfg, std::size_t n_max);

}  // namespace mprk
