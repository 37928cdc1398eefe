#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bloch/quadrature.hpp"
#include "bloch/solvers.hpp"
#include "bloch/spectra.hpp"

namespace bloch {

class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when --help is requested; carries the help text.
struct HelpRequested {
    std::string text;
};

/// Flat run configuration: command-line flags override config-file values.
struct RunConfig {
    std::string command;

    std::string spec_kind = "phonon";
    double alpha = 1.0;
    double beta = 1.0;
    double gap = 0.0;
    double ef_ratio = 100.0;

    int grid_n = 400;
    double grid_xmax = 40.0;

    std::string method = "leading";
    bool no_k1 = false;
    bool allow_high_temp = false;

    double tmin = 0.002;
    double tmax = 0.02;
    int npoints = 8;
    std::string tspacing = "log";
    double temp = 0.01;

    std::string out;
    std::string format = "csv";
    double tol = 0.0;  // validate: overrides every check tolerance when > 0
    int threads = 0;

    ExcitationSpectrum spectrum() const;
    Grid make_grid() const;
    Method solver_method() const;
    SolveOptions solve_options() const;

    /// Flat `key = value` lines accepted back through --config.
    std::string to_config_file() const;
};

/// Parses arguments (without the program name). Throws UsageError on bad
/// input (naming the offending key) and HelpRequested for --help.
RunConfig parse_config(const std::vector<std::string>& args);

int cmd_solve(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_spectrum(const RunConfig& config);
int cmd_validate(const RunConfig& config);

/// Parse + dispatch + exit-code mapping:
/// 0 ok, 1 usage, 2 regime error, 3 verification failure, 4 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace bloch
