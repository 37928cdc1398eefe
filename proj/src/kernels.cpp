#include "bloch/kernels.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bloch/errors.hpp"

namespace bloch {

double stable_combo(double x, double y) {
    if (y == 0.0) throw std::domain_error("stable_combo: pole at y = 0");
    const double ratio = std::exp(0.5 * (log_weight_w(x + y) - log_weight_w(x)));
    return ratio / (2.0 * std::sinh(0.5 * y));
}

double kbar0_reduced(double x, double y) {
    if (y == 0.0) return 0.0;
    return stable_combo(x, y) * y * std::abs(y);
}

namespace {

// Pure power-law shape of the reduced kernel integrand: shape0 = sgn(y)|y|^p0,
// shape1 = |y|^(p0+1), shape2 = sgn(y)|y|^(p0+2/a) (shape0 for the coulomb
// preset). The 1/2 of vbar2 and the 1/(2 eps_F) of vbar1 live in the rate
// prefactors, so gamma_nu reduces to the bare moment integrals.
double shape_nu(int nu, const ExcitationSpectrum& spec, double ay, double sy) {
    const double p0 = spec.exponent0();
    switch (nu) {
        case 0: return sy * std::pow(ay, p0);
        case 1: return std::pow(ay, p0 + 1.0);
        case 2:
            if (spec.kind == ExcitationKind::coulomb) return sy * std::pow(ay, p0);
            return sy * std::pow(ay, p0 + 2.0 / spec.alpha);
    }
    throw std::invalid_argument("kernel index nu must be 0, 1 or 2");
}

}  // namespace

double reduced_kernel(int nu, const ExcitationSpectrum& spec, double T, double x,
                      double y) {
    if (y == 0.0) return 0.0;
    const double ay = std::abs(y);
    if (spec.gapped() && ay * T < spec.gap * spec.scales.omega0) return 0.0;
    return stable_combo(x, y) * shape_nu(nu, spec, ay, y > 0 ? 1.0 : -1.0);
}

double kbar_nu(int nu, double eps, double u, double T, const ExcitationSpectrum& spec) {
    if (!(T > 0.0)) throw RegimeError("kbar_nu: temperature must be positive");
    if (u == eps) return 0.0;
    const double combo = stable_combo(eps / T, (u - eps) / T);
    switch (nu) {
        case 0: return combo * vbar0(spec, u - eps);
        case 1: return combo * vbar1(spec, u - eps);
        case 2: return combo * vbar2(spec, u - eps);
    }
    throw std::invalid_argument("kernel index nu must be 0, 1 or 2");
}

double rate_prefactor(int nu, const ExcitationSpectrum& spec, double T) {
    const double omega0 = spec.scales.omega0;
    const double pref0 = T * std::pow(T / omega0, spec.exponent0());
    switch (nu) {
        case 0: return pref0;
        case 1: return pref0 * T / (2.0 * spec.scales.eps_fermi());
        case 2:
            if (spec.kind == ExcitationKind::coulomb) return pref0;
            return pref0 * 0.5 * std::pow(T / omega0, 2.0 / spec.alpha);
    }
    throw std::invalid_argument("kernel index nu must be 0, 1 or 2");
}

void check_regime(const ExcitationSpectrum& spec, double T, bool allow_high_temp) {
    if (!(T > 0.0))
        throw RegimeError("temperature must be positive (the T = 0 limit is singular)");
    const double omega0 = spec.scales.omega0;
    if (spec.gapped() && T <= spec.gap * omega0) {
        std::ostringstream msg;
        msg << "T = " << T << " is at or below the spectral gap " << spec.gap * omega0
            << "; the gapped regime requires a separate treatment";
        throw RegimeError(msg.str());
    }
    if (spec.kind == ExcitationKind::phonon && !allow_high_temp && T > 0.1 * omega0) {
        std::ostringstream msg;
        msg << "T = " << T << " exceeds omega0/10 = " << 0.1 * omega0
            << "; phonon runs enforce T <= omega0/10 by default (override available)";
        throw RegimeError(msg.str());
    }
}

double gamma_nu(int nu, double x, const ExcitationSpectrum& spec, double T,
                double rel_tol) {
    if (!(T > 0.0)) throw RegimeError("gamma_nu: temperature must be positive");
    const double omega0 = spec.scales.omega0;
    if (spec.gapped() && T <= spec.gap * omega0)
        throw RegimeError("gamma_nu: T must exceed the spectral gap");
    if (nu == 0 && spec.rate0_divergent())
        throw RegimeError(
            "gamma_nu: the single-particle rate is infrared-divergent for this "
            "spectrum (exponent0 <= 0 without a gap); only nu = 1, 2 are finite");

    // Both half-lines summed pointwise so odd parts cancel exactly. The
    // integration variable is shifted so the gap edge (a jump of the gated
    // integrand) sits at the origin, where the double-exponential rule
    // evaluates through complements and never collides with the endpoint.
    const double y_lo = spec.gapped() ? spec.gap * omega0 / T : 0.0;
    auto integrand = [&](double s) {
        const double y = y_lo + s;
        return reduced_kernel(nu, spec, T, x, y) + reduced_kernel(nu, spec, T, x, -y);
    };

    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    const double value =
        integrator.integrate(integrand, 0.0, kRateCutoffY - y_lo, 0.25 * rel_tol,
                             &error, &l1, &levels);
    const double scale = std::max(l1, 1e-300);
    if (error > rel_tol * scale) {
        std::ostringstream msg;
        msg << "gamma_nu: quadrature did not reach relative tolerance " << rel_tol
            << " (achieved " << error / scale << ") at nu = " << nu << ", x = " << x;
        throw NumericalError(msg.str());
    }
    return value;
}

RateTable build_rate_table(const Grid& grid, const ExcitationSpectrum& spec, double T,
                           double rel_tol) {
    if (spec.rate0_divergent())
        throw RegimeError(
            "build_rate_table: gamma0 is infrared-divergent for this spectrum");
    RateTable table;
    table.grid = grid;
    table.spec = spec;
    table.temperature = T;
    const int n = grid.n();
    table.gamma0.resize(n);
    table.gamma1.resize(n);
    table.gamma2.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = grid.nodes[i];
        table.gamma0[i] = gamma_nu(0, x, spec, T, rel_tol);
        table.gamma1[i] = gamma_nu(1, x, spec, T, rel_tol);
        table.gamma2[i] = gamma_nu(2, x, spec, T, rel_tol);
    }
    return table;
}

}  // namespace bloch
