#pragma once

#include "bloch/quadrature.hpp"
#include "bloch/spectra.hpp"

namespace bloch {

/// Occupation combination n(y) + f(y + x) evaluated in the detailed-balance
/// form sqrt(w(x+y)/w(x)) / (2 sinh(y/2)). Agrees with the naive sum where
/// both are finite and stays accurate out to the grid cutoff where the naive
/// form loses precision. Throws std::domain_error at y = 0 (simple pole);
/// kernel-path callers multiply by a factor vanishing at y = 0 first.
double stable_combo(double x, double y);

/// Reduced dimensionless kernel combo(x,y) * y^2 * sgn(y): continuous,
/// nonnegative, zero iff y = 0.
double kbar0_reduced(double x, double y);

/// Dimensionless reduced kernel integrand for index nu in the energy-transfer
/// variable y = (u - eps)/T: combo(x, y) times the power-law shape of
/// vbar_nu(T y) with the temperature prefactor factored out. Zero on the
/// diagonal and inside the gap. For phonons and nu = 0 this is kbar0_reduced.
double reduced_kernel(int nu, const ExcitationSpectrum& spec, double T, double x,
                      double y);

/// Unnormalized physical kernel Kbar_nu(eps, u) for temperature T (energies in
/// units of omega0 times omega0, i.e. absolute). Diagonal u == eps returns 0.
double kbar_nu(int nu, double eps, double u, double T, const ExcitationSpectrum& spec);

/// Temperature scaling prefactor of the rate Gamma_nu, such that
/// Gamma_nu(eps) = rate_prefactor(nu) * gamma_nu(eps / T).
double rate_prefactor(int nu, const ExcitationSpectrum& spec, double T);

/// Dimensionless rate gamma_nu(x) = integral over y of the reduced kernel,
/// evaluated by adaptive quadrature on (gap/T, y_max] with the two half-lines
/// summed pointwise (odd parts cancel exactly). Throws RegimeError outside
/// the valid temperature window or for infrared-divergent spectra (nu = 0),
/// NumericalError if the quadrature cannot reach rel_tol.
double gamma_nu(int nu, double x, const ExcitationSpectrum& spec, double T,
                double rel_tol = 1e-10);

/// Inner-integral cutoff for the rate quadrature; the integrand decays like
/// a power times exp(-|y|/2), so the truncation error is negligible against
/// rel_tol for every supported spectrum.
inline constexpr double kRateCutoffY = 60.0;

/// Rates tabulated on the grid nodes. gamma0 is even and positive, gamma1
/// odd, gamma2 even and positive; values are adaptive-quadrature results,
/// never interpolated.
struct RateTable {
    Grid grid;
    ExcitationSpectrum spec;
    double temperature = 0.0;
    std::vector<double> gamma0;
    std::vector<double> gamma1;
    std::vector<double> gamma2;
};

RateTable build_rate_table(const Grid& grid, const ExcitationSpectrum& spec, double T,
                           double rel_tol = 1e-10);

/// Checks the temperature against the regime rules (T > 0; gapped spectra
/// need T > gap; phonons default to T <= omega0/10 unless overridden).
/// Throws RegimeError on violation.
void check_regime(const ExcitationSpectrum& spec, double T, bool allow_high_temp = false);

}  // namespace bloch
