#include "mprk/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>
#include <utility>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mprk/errors.hpp"
#include "mprk/integrator.hpp"
#include "mprk/pds.hpp"
#include "mprk/stability.hpp"

namespace mprk::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Figure-2 check: errors after this time must be below kSteadyErrorTol.
constexpr double kSteadyFromTime = 700.0;
constexpr double kSteadyErrorTol = 1e-12;
constexpr double kMassDriftTol = 1e-12;
constexpr double kJacobianAgreementTol = 1e-6;

Vector to_vector(const std::array<double, 2>& a) { return {a[0], a[1]}; }

ReferenceSolution analytic_reference(const std::array<double, 2>& y0) {
    return [y0 = to_vector(y0)](double t) { return analytic_solution(y0, t); };
}

double max_mass_drift(const Trajectory& traj) {
    const double mass0 = sum(traj.states.front());
    double drift = 0.0;
    for (const auto& y : traj.states) drift = std::max(drift, std::abs(sum(y) - mass0) / mass0);
    return drift;
}

bool all_positive(const Trajectory& traj) {
    for (const auto& y : traj.states) {
        for (double v : y) {
            if (!(v > 0.0)) return false;
        }
    }
    return true;
}

double max_error_after(const Trajectory& traj, double t_from) {
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] < t_from) continue;
        for (double e : traj.errors[k]) worst = std::max(worst, e);
    }
    return worst;
}

CsvTable solve_table(const Trajectory& traj, const std::array<double, 2>& y0) {
    CsvTable t;
    t.header = {"t", "y1", "y2", "y1_exact", "y2_exact", "err1", "err2", "mass"};
    const Vector y0v = to_vector(y0);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& y = traj.states[k];
        const StateVector exact = analytic_solution(y0v, traj.times[k]);
        t.add_row({format_number(traj.times[k]), format_number(y[0]), format_number(y[1]),
                   format_number(exact[0]), format_number(exact[1]), format_number(traj.errors[k][0]),
                   format_number(traj.errors[k][1]), format_number(y[0] + y[1])});
    }
    return t;
}

std::string format_matrix(const Matrix& m) {
    return fmt::format("[[{:.17g}, {:.17g}], [{:.17g}, {:.17g}]]", m(0, 0), m(0, 1), m(1, 0), m(1, 1));
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    }
}

}  // namespace

double RunSpec::resolved_dt() const {
    if (dt) return *dt;
    return subcommand == Subcommand::convergence ? 0.02 : 2.0;
}

double RunSpec::resolved_t_end() const {
    if (t_end) return *t_end;
    return subcommand == Subcommand::convergence ? 0.1 : 1000.0;
}

void RunSpec::validate() const {
    if (!(alpha >= 0.5) || !std::isfinite(alpha)) {
        throw UsageError(fmt::format("--alpha must be >= 0.5 (got {})", alpha));
    }
    const double h = resolved_dt();
    if (!(h > 0.0) || !std::isfinite(h)) throw UsageError(fmt::format("--dt must be positive (got {})", h));
    const double te = resolved_t_end();
    if (!(te > 0.0) || !std::isfinite(te)) {
        throw UsageError(fmt::format("--t-end must be positive (got {})", te));
    }
    if (!(y0[0] > 0.0) || !(y0[1] > 0.0) || !std::isfinite(y0[0]) || !std::isfinite(y0[1])) {
        throw UsageError("--y0 components must be positive");
    }
    if (refinements < 1) throw UsageError("--refinements must be at least 1");
    if (figure && *figure != 1 && *figure != 2) throw UsageError("--figure must be 1 or 2");
}

std::array<double, 2> parse_pair(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
        throw UsageError(fmt::format("expected two comma-separated numbers, got '{}'", text));
    }
    std::array<double, 2> out{};
    const std::string_view parts[2] = {text.substr(0, comma), text.substr(comma + 1)};
    for (int k = 0; k < 2; ++k) {
        const auto part = parts[k];
        const auto res = std::from_chars(part.data(), part.data() + part.size(), out[k]);
        if (res.ec != std::errc{} || res.ptr != part.data() + part.size() || part.empty()) {
            throw UsageError(fmt::format("'{}' is not a number", part));
        }
    }
    return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::invalid_argument("CsvTable: row width does not match header");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    return fmt::format("{:.17g}", v);
}

double parse_number(std::string_view cell) {
    if (cell.empty()) return kNaN;
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw std::invalid_argument(fmt::format("'{}' is not a number", cell));
    }
    return v;
}

std::string to_csv(const CsvTable& table) {
    std::string s;
    auto append_line = [&s](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) s += ',';
            s += cells[i];
        }
        s += '\n';
    };
    append_line(table.header);
    for (const auto& r : table.rows) append_line(r);
    return s;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    bool first = true;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.add_row(std::move(cells));
        }
    }
    return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    f << to_csv(table);
    f.flush();
    if (!f) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_csv(buf.str());
}

ConvergenceStudy convergence_study(double alpha, std::array<double, 2> y0, double t_end, double dt0,
                                   int refinements) {
    const PdsSystem pds = make_test_problem();
    const Vector y0v = to_vector(y0);
    const StateVector exact = analytic_solution(y0v, t_end);
    // Errors below this are indistinguishable from rounding.
    const double noise = 1e-13 * (y0[0] + y0[1]);

    ConvergenceStudy study;
    double dt = dt0;
    for (int k = 0; k <= refinements; ++k, dt *= 0.5) {
        const Trajectory traj = integrate(pds, y0v, SchemeConfig(alpha, dt), t_end);
        const auto& y = traj.final_state();
        const double err = std::max(std::abs(y[0] - exact[0]), std::abs(y[1] - exact[1]));
        double order = kNaN;
        if (k > 0 && study.errors.back() > noise && err > noise) order = std::log2(study.errors.back() / err);
        study.dts.push_back(dt);
        study.errors.push_back(err);
        study.orders.push_back(order);
    }
    study.at_rounding_level = true;
    for (double e : study.errors) {
        if (e > noise) study.at_rounding_level = false;
    }
    return study;
}

int cmd_solve(const RunSpec& spec, std::ostream& out) {
    spec.validate();
    const Vector y0 = to_vector(spec.y0);
    const Trajectory traj = integrate(make_test_problem(), y0, SchemeConfig(spec.alpha, spec.resolved_dt()),
                                      spec.resolved_t_end(), analytic_reference(spec.y0));
    const CsvTable table = solve_table(traj, spec.y0);
    if (spec.out.empty()) {
        out << to_csv(table);
    } else {
        write_csv(spec.out, table);
        const auto& y = traj.final_state();
        fmt::print(out, "solve: alpha={} dt={} steps={} final=({:.17g}, {:.17g}) -> {}\n", spec.alpha,
                   spec.resolved_dt(), traj.size() - 1, y[0], y[1], spec.out);
    }

    const double drift = max_mass_drift(traj);
    if (!all_positive(traj)) {
        fmt::print(out, "check failed: nonpositive state in trajectory\n");
        return kCheckFailure;
    }
    if (drift > kMassDriftTol) {
        fmt::print(out, "check failed: relative mass drift {:.3e} > {:.0e}\n", drift, kMassDriftTol);
        return kCheckFailure;
    }
    return kSuccess;
}

int cmd_stability(const RunSpec& spec, std::ostream& out) {
    spec.validate();
    const double dt = spec.resolved_dt();
    const SteadyState steady = steady_state(to_vector(spec.y0));
    const SchemeConfig cfg(spec.alpha, dt);

    const Matrix fd = jacobian_fd(one_step_map(make_test_problem(), cfg), steady.y_star);
    const Matrix assembled = assemble_dg(closed_form_blocks(steady.c, dt, spec.alpha));
    const Matrix closed = dg_closed_form(steady.c, dt);
    const double discrepancy = std::max(
        {max_abs_diff(fd, assembled), max_abs_diff(fd, closed), max_abs_diff(assembled, closed)});

    const StabilityReport report = spectral_analysis(closed, mass_invariant(steady.y_star));
    const double z = 2.0 * dt * steady.c;
    const double r = stability_function(z);

    fmt::print(out, "steady state y* = ({:.17g}, {:.17g}), c = {:.17g}, alpha = {}, dt = {}\n",
               steady.y_star[0], steady.y_star[1], steady.c, spec.alpha, dt);
    fmt::print(out, "Dg finite differences : {}\n", format_matrix(fd));
    fmt::print(out, "Dg block assembly     : {}\n", format_matrix(assembled));
    fmt::print(out, "Dg closed form        : {}\n", format_matrix(closed));
    fmt::print(out, "max pairwise discrepancy: {:.3e}\n", discrepancy);
    fmt::print(out, "eigenvalues: {:.17g}, {:.17g}\n", report.eigenvalues[0], report.eigenvalues[1]);
    fmt::print(out, "transverse eigenvalue: {:.17g}   R(2 dt c) = R({:.17g}) = {:.17g}\n",
               report.transverse_eigenvalue, z, r);
    fmt::print(out, "classification: {}\n", to_string(report.classification));

    if (!spec.out.empty()) {
        CsvTable t;
        t.header = {"method", "dg11", "dg12", "dg21", "dg22", "lambda1", "lambda2", "transverse", "R",
                    "classification"};
        const std::pair<const char*, const Matrix*> methods[] = {
            {"finite_difference", &fd}, {"block_assembly", &assembled}, {"closed_form", &closed}};
        SpectralOptions loose;
        loose.symmetry_tol = kJacobianAgreementTol;
        loose.invariant_tol = kJacobianAgreementTol;
        for (const auto& [name, m] : methods) {
            const StabilityReport rep = spectral_analysis(*m, mass_invariant(steady.y_star),
                                                          m == &fd ? loose : SpectralOptions{});
            t.add_row({name, format_number((*m)(0, 0)), format_number((*m)(0, 1)), format_number((*m)(1, 0)),
                       format_number((*m)(1, 1)), format_number(rep.eigenvalues[0]),
                       format_number(rep.eigenvalues[1]), format_number(rep.transverse_eigenvalue),
                       format_number(r), std::string(to_string(rep.classification))});
        }
        write_csv(spec.out, t);
    }

    if (discrepancy >= kJacobianAgreementTol) {
        fmt::print(out, "check failed: Jacobian discrepancy {:.3e} >= {:.0e}\n", discrepancy,
                   kJacobianAgreementTol);
        return kCheckFailure;
    }
    if (report.classification != Classification::stable) {
        fmt::print(out, "check failed: fixed point classified {}\n", to_string(report.classification));
        return kCheckFailure;
    }
    return kSuccess;
}

int cmd_convergence(const RunSpec& spec, std::ostream& out) {
    spec.validate();
    const ConvergenceStudy study =
        convergence_study(spec.alpha, spec.y0, spec.resolved_t_end(), spec.resolved_dt(), spec.refinements);

    CsvTable t;
    t.header = {"dt", "error", "order"};
    for (std::size_t k = 0; k < study.dts.size(); ++k) {
        t.add_row({format_number(study.dts[k]), format_number(study.errors[k]), format_number(study.orders[k])});
    }
    if (spec.out.empty()) {
        out << to_csv(t);
    } else {
        write_csv(spec.out, t);
    }

    if (study.at_rounding_level) {
        fmt::print(out, "errors at rounding level; orders not reported\n");
        return kSuccess;
    }
    const std::size_t n = study.orders.size();
    const std::size_t first = n > 4 ? n - 3 : 1;
    for (std::size_t k = first; k < n; ++k) {
        const double p = study.orders[k];
        if (!(p >= 1.7 && p <= 2.3)) {
            fmt::print(out, "check failed: observed order {:.4f} at dt={} outside [1.7, 2.3]\n", p, study.dts[k]);
            return kCheckFailure;
        }
    }
    return kSuccess;
}

int cmd_reproduce(const RunSpec& spec, std::ostream& out) {
    spec.validate();
    ensure_directory(spec.out_dir);
    bool ok = true;

    if (!spec.figure || *spec.figure == 1) {
        const Vector y0 = to_vector(spec.y0);
        CsvTable t;
        t.header = {"t", "y1", "y2"};
        constexpr int kSamples = 600;  // t = 0, 0.001, ..., 0.6
        for (int k = 0; k <= kSamples; ++k) {
            const double time = 0.001 * k;
            const StateVector y = analytic_solution(y0, time);
            t.add_row({format_number(time), format_number(y[0]), format_number(y[1])});
        }
        write_csv(spec.out_dir / "fig1_analytic.csv", t);

        const SteadyState steady = steady_state(y0);
        const StateVector at = analytic_solution(y0, 0.4);
        const double gap = std::max(std::abs(at[0] - steady.c), std::abs(at[1] - steady.c));
        fmt::print(out, "figure 1: |y(0.4) - y*|_inf = {:.3e}\n", gap);
        if (gap > 2e-3) {
            fmt::print(out, "check failed: analytic solution not within 2e-3 of y* at t = 0.4\n");
            ok = false;
        }
    }

    if (!spec.figure || *spec.figure == 2) {
        const double alphas[] = {0.5, 1.0, 2.0};
        const char* panels[][2] = {{"fig2a", "fig2b"}, {"fig2c", "fig2d"}, {"fig2e", "fig2f"}};
        const double dt = spec.resolved_dt();
        const double t_end = spec.resolved_t_end();

        std::vector<std::future<Trajectory>> runs;
        for (double a : alphas) {
            runs.push_back(std::async(std::launch::async, [a, dt, t_end, y0 = spec.y0] {
                return integrate(make_test_problem(), to_vector(y0), SchemeConfig(a, dt), t_end,
                                 analytic_reference(y0));
            }));
        }
        for (std::size_t k = 0; k < runs.size(); ++k) {
            const Trajectory traj = runs[k].get();
            CsvTable solution;
            solution.header = {"t", "y1", "y2", "y1_exact", "y2_exact"};
            CsvTable error;
            error.header = {"t", "err1", "err2"};
            const Vector y0 = to_vector(spec.y0);
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const auto& y = traj.states[i];
                const StateVector ex = analytic_solution(y0, traj.times[i]);
                solution.add_row({format_number(traj.times[i]), format_number(y[0]), format_number(y[1]),
                                  format_number(ex[0]), format_number(ex[1])});
                error.add_row({format_number(traj.times[i]), format_number(traj.errors[i][0]),
                               format_number(traj.errors[i][1])});
            }
            const std::string tag = fmt::format("alpha{}", alphas[k]);
            write_csv(spec.out_dir / fmt::format("{}_{}_solution.csv", panels[k][0], tag), solution);
            write_csv(spec.out_dir / fmt::format("{}_{}_error.csv", panels[k][1], tag), error);

            const double late = max_error_after(traj, kSteadyFromTime);
            fmt::print(out, "figure 2, alpha = {}: max error for t >= {} is {:.3e}\n", alphas[k],
                       kSteadyFromTime, late);
            if (!all_positive(traj)) {
                fmt::print(out, "check failed: nonpositive state for alpha = {}\n", alphas[k]);
                ok = false;
            }
            if (t_end >= kSteadyFromTime && late > kSteadyErrorTol) {
                fmt::print(out, "check failed: error {:.3e} > {:.0e} for alpha = {}\n", late, kSteadyErrorTol,
                           alphas[k]);
                ok = false;
            }
        }
    }
    return ok ? kSuccess : kCheckFailure;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    try {
        switch (spec.subcommand) {
            case Subcommand::solve: return cmd_solve(spec, out);
            case Subcommand::stability: return cmd_stability(spec, out);
            case Subcommand::convergence: return cmd_convergence(spec, out);
            case Subcommand::reproduce: return cmd_reproduce(spec, out);
        }
    } catch (const UsageError& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return kUsageError;
    } catch (const IoError& e) {
        fmt::print(err, "I/O error: {}\n", e.what());
        return kIoError;
    } catch (const DomainError& e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return kUsageError;
    } catch (const std::exception& e) {
        fmt::print(err, "numerical failure: {}\n", e.what());
        return kCheckFailure;
    }
    return kUsageError;
}

}  // namespace mprk::experiments
