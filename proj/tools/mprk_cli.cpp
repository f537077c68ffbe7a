// Command-line front end: integrates the quadratic test problem with
// MPRK22(alpha), checks the fixed-point Jacobian and writes CSV for plotting.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mprk/experiments.hpp"

namespace ex = mprk::experiments;

namespace {

void add_y0(CLI::App* cmd, std::string& y0_text) {
    cmd->add_option("--y0", y0_text, "Initial state as a,b (default 9.98,0.02)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MPRK22(alpha) integrator and fixed-point stability laboratory", "mprk"};
    app.require_subcommand(1);

    ex::RunSpec spec;
    std::string y0_text;
    double dt = 0.0;
    double t_end = 0.0;
    int figure = 0;

    auto* solve = app.add_subcommand("solve", "Integrate the test problem and write the trajectory as CSV");
    solve->add_option("--alpha", spec.alpha, "Scheme parameter alpha >= 0.5")->default_val(1.0);
    solve->add_option("--dt", dt, "Time step (default 2)");
    solve->add_option("--t-end", t_end, "Final time (default 1000)");
    add_y0(solve, y0_text);
    solve->add_option("--out", spec.out, "Output CSV file (stdout if omitted)");

    auto* stability = app.add_subcommand("stability", "Jacobian of the one-step map at the steady state");
    stability->add_option("--alpha", spec.alpha, "Scheme parameter alpha >= 0.5")->default_val(1.0);
    stability->add_option("--dt", dt, "Time step (default 2)");
    add_y0(stability, y0_text);
    stability->add_option("--out", spec.out, "Optional CSV report");

    auto* convergence = app.add_subcommand("convergence", "Time-step halving study against the exact solution");
    convergence->add_option("--alpha", spec.alpha, "Scheme parameter alpha >= 0.5")->default_val(1.0);
    convergence->add_option("--t-end", t_end, "Final time (default 0.1)");
    convergence->add_option("--refinements", spec.refinements, "Number of halvings (default 6)");
    convergence->add_option("--dt", dt, "Coarsest time step (default 0.02)");
    add_y0(convergence, y0_text);
    convergence->add_option("--out", spec.out, "Output CSV file (stdout if omitted)");

    auto* reproduce = app.add_subcommand("reproduce", "Write the data behind the published figures");
    reproduce->add_option("--figure", figure, "Figure to reproduce (1 or 2; both if omitted)");
    reproduce->add_option("--out-dir", spec.out_dir, "Output directory")->default_val(".");
    reproduce->add_option("--dt", dt, "Time step (default 2)");
    reproduce->add_option("--t-end", t_end, "Final time (default 1000)");
    add_y0(reproduce, y0_text);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ex::kUsageError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == solve) spec.subcommand = ex::Subcommand::solve;
    if (chosen == stability) spec.subcommand = ex::Subcommand::stability;
    if (chosen == convergence) spec.subcommand = ex::Subcommand::convergence;
    if (chosen == reproduce) spec.subcommand = ex::Subcommand::reproduce;

    auto given = [chosen](const char* name) {
        const CLI::Option* opt = chosen->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--dt")) spec.dt = dt;
    if (given("--t-end")) spec.t_end = t_end;
    if (given("--figure")) spec.figure = figure;

    try {
        if (!y0_text.empty()) spec.y0 = ex::parse_pair(y0_text);
    } catch (const ex::UsageError& e) {
        std::cerr << "usage error: --y0: " << e.what() << "\n";
        return ex::kUsageError;
    }

    return ex::run(spec, std::cout, std::cerr);
}
