#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mprk::experiments {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kCheckFailure = 2,
    kIoError = 3,
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Subcommand { solve, stability, convergence, reproduce };

/// Parameters shared by all subcommands. Unset optionals take the
/// per-subcommand defaults (t_end: 1000 for solve/reproduce, 0.1 for
/// convergence; dt: 2, or 0.02 as the coarsest convergence step).
struct RunSpec {
    Subcommand subcommand = Subcommand::solve;
    double alpha = 1.0;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::array<double, 2> y0{9.98, 0.02};
    std::string out;
    std::filesystem::path out_dir = ".";
    int refinements = 6;
    std::optional<int> figure;  // unset: both figures

    double resolved_dt() const;
    double resolved_t_end() const;

    /// Throws UsageError on alpha < 1/2, dt <= 0, t_end <= 0, y0 not positive,
    /// refinements < 1 or a figure other than 1 or 2.
    void validate() const;
};

/// Parses "a,b" into a pair of reals; throws UsageError.
std::array<double, 2> parse_pair(std::string_view text);

/// Comma separated table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

/// 17 significant digits ("%.17g"); NaN is written as an empty cell.
std::string format_number(double v);

/// Inverse of format_number; an empty cell reads as NaN.
double parse_number(std::string_view cell);

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

/// Writes with Unix line endings; throws IoError.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// One row per refinement level.
struct ConvergenceStudy {
    std::vector<double> dts;
    std::vector<double> errors;
    /// orders[k] compares dts[k - 1] and dts[k]; orders[0] and orders at
    /// rounding-level errors are NaN.
    std::vector<double> orders;
    bool at_rounding_level = false;
};

/// Max-norm error at t_end against the closed-form solution for
/// dt0, dt0/2, ..., dt0/2^refinements.
ConvergenceStudy convergence_study(double alpha, std::array<double, 2> y0, double t_end, double dt0,
                                   int refinements);

// Each command writes its report to `out` and returns an ExitCode. UsageError
// and IoError propagate to the caller.
int cmd_solve(const RunSpec& spec, std::ostream& out);
int cmd_stability(const RunSpec& spec, std::ostream& out);
int cmd_convergence(const RunSpec& spec, std::ostream& out);
int cmd_reproduce(const RunSpec& spec, std::ostream& out);

/// Dispatches on spec.subcommand and maps exceptions to exit codes, printing
/// a one-line reason to `err`.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace mprk::experiments
