#pragma once

#include <string>

namespace bloch {

/// Characteristic energy scales of the problem. omega0 is the boson energy
/// scale and sets the energy unit; the Fermi energy is kept as the ratio
/// ef_ratio = eps_F / omega0.
struct PhysicalScales {
    double omega0 = 1.0;
    double ef_ratio = 100.0;

    double eps_fermi() const { return ef_ratio * omega0; }
};

/// Returns a non-empty warning when the scale separation eps_F >> omega0 that
/// the low-temperature expansion relies on is weak (ef_ratio < 10).
std::string scale_warning(const PhysicalScales& scales);

enum class ExcitationKind { phonon, magnon, coulomb, custom };

const char* to_string(ExcitationKind kind);

/// A boson-mediated scattering channel. The dispersion exponent alpha
/// (omega_q ~ |q|^alpha) and coupling exponent beta (spectrum ~ omega^beta)
/// fix the power laws of the angular-averaged potential spectra; magnon-like
/// channels additionally carry a spectral gap (in units of omega0).
struct ExcitationSpectrum {
    ExcitationKind kind = ExcitationKind::phonon;
    double alpha = 1.0;
    double beta = 1.0;
    double gap = 0.0;  // in units of omega0
    PhysicalScales scales{};

    /// Exponent of |u/omega0| in vbar0.
    double exponent0() const { return 2.0 / alpha + beta - 1.0; }
    bool gapped() const { return gap > 0.0; }

    /// True when the single-particle rate integral diverges at small energy
    /// transfer (exponent0 <= 0 with no gap). Only averaged-rate quantities
    /// are defined for such spectra.
    bool rate0_divergent() const { return !gapped() && exponent0() <= 0.0; }
};

ExcitationSpectrum phonon_spectrum(PhysicalScales scales = {});
ExcitationSpectrum magnon_spectrum(double gap, PhysicalScales scales = {});
ExcitationSpectrum coulomb_spectrum(PhysicalScales scales = {});
ExcitationSpectrum custom_spectrum(double alpha, double beta, double gap,
                                   PhysicalScales scales = {});

ExcitationSpectrum make_spectrum(ExcitationKind kind, double alpha, double beta,
                                 double gap, PhysicalScales scales);

/// Angular-averaged potential spectra. All three carry unit prefactor;
/// results of the engine are meaningful up to one overall constant.
/// vbar0 and vbar2 are odd in u, vbar1 is even; gapped spectra vanish for
/// |u| < gap * omega0.
double vbar0(const ExcitationSpectrum& spec, double u);
double vbar1(const ExcitationSpectrum& spec, double u);
double vbar2(const ExcitationSpectrum& spec, double u);

}  // namespace bloch
