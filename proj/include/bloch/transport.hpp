#pragma once

#include <span>
#include <string>
#include <vector>

#include "bloch/solvers.hpp"

namespace bloch {

/// One temperature point. Units: T in omega0, tau in 1/omega0, and
/// sigma = tau under the n e^2 / m = 1 convention.
struct TransportPoint {
    double temperature = 0.0;
    double tau = 0.0;
    double sigma = 0.0;
    double residual = 0.0;
    Method method = Method::leading_order;
    bool ok = false;
    std::string error;
};

struct FitResult {
    double exponent = 0.0;
    double stderr_ = 0.0;
    int n_points = 0;
};

struct SweepResult {
    std::vector<TransportPoint> points;  // sorted by temperature
    FitResult fit;
    bool fit_ok = false;
    std::string fit_error;
    ExcitationSpectrum spec;
    Method method = Method::leading_order;
};

/// tau = 1/2 sum_i q_i w(x_i) phi(x_i). Throws on grid size mismatch.
double relaxation_time(const SolutionPhi& phi, const Grid& grid);

/// sigma = tau (unit Drude prefactor).
double conductivity(double tau);

/// Log-spaced (or linear) temperature ladder.
std::vector<double> temperature_ladder(double t_min, double t_max, int n_points,
                                       bool log_spacing = true);

/// One independent solve per temperature; per-point failures are recorded and
/// the sweep continues. threads = 0 picks the hardware default; results are
/// identical for any thread count.
SweepResult sweep(const ExcitationSpectrum& spec, Method method,
                  std::span<const double> t_values, const Grid& grid,
                  const SolveOptions& opts = {}, int threads = 0);

/// Unweighted least squares of log sigma against log T.
/// Requires >= 5 points, all sigma > 0.
FitResult fit_power_law(std::span<const TransportPoint> points);

}  // namespace bloch
