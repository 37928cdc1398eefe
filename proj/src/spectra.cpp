#include "bloch/spectra.hpp"

#include <cmath>
#include <stdexcept>

namespace bloch {

std::string scale_warning(const PhysicalScales& scales) {
    if (scales.ef_ratio < 10.0)
        return "eps_F / omega0 = " + std::to_string(scales.ef_ratio) +
               " is below 10; the scale separation the low-temperature "
               "expansion relies on is weak";
    return {};
}

const char* to_string(ExcitationKind kind) {
    switch (kind) {
        case ExcitationKind::phonon: return "phonon";
        case ExcitationKind::magnon: return "magnon";
        case ExcitationKind::coulomb: return "coulomb";
        case ExcitationKind::custom: return "custom";
    }
    return "?";
}

namespace {

void validate_scales(const PhysicalScales& scales) {
    if (!(scales.omega0 > 0.0))
        throw std::invalid_argument("spectrum: omega0 must be positive");
    if (!(scales.ef_ratio > 1.0))
        throw std::invalid_argument("spectrum: eps_F must exceed omega0");
}

}  // namespace

ExcitationSpectrum phonon_spectrum(PhysicalScales scales) {
    validate_scales(scales);
    return {ExcitationKind::phonon, 1.0, 1.0, 0.0, scales};
}

ExcitationSpectrum magnon_spectrum(double gap, PhysicalScales scales) {
    validate_scales(scales);
    if (!(gap > 0.0))
        throw std::invalid_argument(
            "spectrum: magnon requires a positive gap (the gapless limit has an "
            "infrared-divergent single-particle rate)");
    return {ExcitationKind::magnon, 2.0, 0.0, gap, scales};
}

ExcitationSpectrum coulomb_spectrum(PhysicalScales scales) {
    validate_scales(scales);
    // Continuous spectrum with vbar0 linear in u; alpha/beta are bookkeeping
    // values reproducing the same rate exponents.
    return {ExcitationKind::coulomb, 2.0, 1.0, 0.0, scales};
}

ExcitationSpectrum custom_spectrum(double alpha, double beta, double gap,
                                   PhysicalScales scales) {
    validate_scales(scales);
    if (!(alpha > 0.0)) throw std::invalid_argument("spectrum: alpha must be > 0");
    if (beta < 0.0) throw std::invalid_argument("spectrum: beta must be >= 0");
    if (gap < 0.0) throw std::invalid_argument("spectrum: gap must be >= 0");
    return {ExcitationKind::custom, alpha, beta, gap, scales};
}

ExcitationSpectrum make_spectrum(ExcitationKind kind, double alpha, double beta,
                                 double gap, PhysicalScales scales) {
    switch (kind) {
        case ExcitationKind::phonon: return phonon_spectrum(scales);
        case ExcitationKind::magnon: return magnon_spectrum(gap, scales);
        case ExcitationKind::coulomb: return coulomb_spectrum(scales);
        case ExcitationKind::custom: return custom_spectrum(alpha, beta, gap, scales);
    }
    throw std::invalid_argument("spectrum: unknown kind");
}

double vbar0(const ExcitationSpectrum& spec, double u) {
    if (u == 0.0) return 0.0;
    const double au = std::abs(u) / spec.scales.omega0;
    if (spec.gapped() && au < spec.gap) return 0.0;
    const double p = spec.exponent0();
    const double mag = (p == 0.0) ? 1.0 : std::pow(au, p);
    return std::copysign(mag, u);
}

double vbar1(const ExcitationSpectrum& spec, double u) {
    return u / (2.0 * spec.scales.eps_fermi()) * vbar0(spec, u);
}

double vbar2(const ExcitationSpectrum& spec, double u) {
    if (spec.kind == ExcitationKind::coulomb) return vbar0(spec, u);
    const double au = std::abs(u) / spec.scales.omega0;
    return 0.5 * std::pow(au, 2.0 / spec.alpha) * vbar0(spec, u);
}

}  // namespace bloch
