#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bloch/operators.hpp"
#include "bloch/spectral.hpp"

namespace bloch {

enum class Method { direct, leading_order, averaged };

const char* to_string(Method method);
std::optional<Method> method_from_string(const std::string& name);

struct SolveOptions {
    bool include_k1 = true;       // drop K1 to mimic the truncated approximation
    bool allow_high_temp = false; // lift the phonon T <= omega0/10 default
    double neumann_tol = 1e-12;   // series truncation, scaled by (1 - lambda_*)
    double quad_tol = 1e-10;      // rate-table quadrature tolerance
};

/// Inverse-rate solution phi on the grid, in units of 1/omega0 at omega0 = 1.
struct SolutionPhi {
    std::vector<double> values;
    std::vector<double> even_part;
    std::vector<double> odd_part;
    Method method = Method::direct;
    double temperature = 0.0;
    double residual = 0.0;        // max-norm residual (direct method)
    int neumann_terms = 0;        // series length (leading_order)
    double phi_plus = 0.0;        // constant even amplitude (leading/averaged)
    double condition_estimate = 0.0;
    bool condition_warning = false;
};

/// Reusable per-(grid, spec[, T]) solver state. For ungapped spectra the
/// kernels are temperature independent and one workspace serves a whole
/// sweep; gapped spectra rebuild per temperature.
class SolverWorkspace {
  public:
    SolverWorkspace(const Grid& grid, const ExcitationSpectrum& spec, double T,
                    const SolveOptions& opts = {});

    const OperatorSet& ops() const { return ops_; }
    const Grid& grid() const { return ops_.grid; }
    const ExcitationSpectrum& spec() const { return ops_.spec; }

    /// lambda_* of K0 (computed on first use, cached).
    double lambda_star() const;

    /// Reusable across temperatures only for ungapped spectra.
    bool reusable_at(double T) const;

    /// Rate vectors feeding the closed-form solvers: grid-consistent row sums
    /// for ungapped spectra (exact discrete structure shared with the direct
    /// solve), adaptive-quadrature rates for gapped ones (grid sums of the
    /// gated kernel carry panel noise).
    Eigen::VectorXd rate_ratio10(double T) const;  // Gamma1/Gamma0 at nodes
    Eigen::VectorXd gamma1_vector(double T) const; // dimensionless gamma1
    Eigen::VectorXd gamma2_vector(double T) const; // dimensionless gamma2
    double gamma2_w_average(double T) const;       // <gamma2>_w
    double gamma0_at(int node, double T) const;    // dimensionless gamma0

    SolutionPhi solve(Method method, double T, const SolveOptions& opts) const;

  private:
    OperatorSet ops_;
    bool gapped_ = false;
    bool has_operators_ = false;
    mutable std::optional<double> lambda_star_;
    // Adaptive-rate tables, filled at construction for gapped spectra (and the
    // gamma2 slot for infrared-divergent ones).
    Eigen::VectorXd adaptive_gamma0_, adaptive_gamma1_, adaptive_gamma2_;
};

SolutionPhi solve_direct(double T, const ExcitationSpectrum& spec, const Grid& grid,
                         const SolveOptions& opts = {});
SolutionPhi solve_leading_order(double T, const ExcitationSpectrum& spec,
                                const Grid& grid, const SolveOptions& opts = {});
SolutionPhi solve_averaged(double T, const ExcitationSpectrum& spec, const Grid& grid,
                           const SolveOptions& opts = {});

SolutionPhi solve_direct(const SolverWorkspace& ws, double T,
                         const SolveOptions& opts = {});
SolutionPhi solve_leading_order(const SolverWorkspace& ws, double T,
                                const SolveOptions& opts = {});
SolutionPhi solve_averaged(const SolverWorkspace& ws, double T,
                           const SolveOptions& opts = {});

/// Second-order eigenvalue of the bookkeeping expansion, computed on an
/// independent code path (odd-subspace factorized solve instead of the
/// iterated series) so that phi_plus == -1/mu0 is a genuine cross-check.
double mu0_second_order(double T, const ExcitationSpectrum& spec, const Grid& grid,
                        const SolveOptions& opts = {});
double mu0_second_order(const SolverWorkspace& ws, double T,
                        const SolveOptions& opts = {});

}  // namespace bloch
