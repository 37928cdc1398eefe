#include <doctest.h>

#include <cmath>

#include "bloch/spectra.hpp"
#include "test_helpers.hpp"

using namespace bloch;
using bloch::testing::rel_err;

TEST_CASE("phonon potential spectra") {
    const ExcitationSpectrum ph = phonon_spectrum();
    CHECK(vbar0(ph, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(vbar0(ph, 0.0) == 0.0);
    CHECK(vbar0(ph, -1.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(vbar2(ph, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(vbar1(ph, 0.0) == 0.0);
    CHECK(vbar2(ph, 0.0) == 0.0);

    const ExcitationSpectrum ph100 = phonon_spectrum({1.0, 100.0});
    CHECK(vbar1(ph100, 1.0) == doctest::Approx(0.005).epsilon(1e-14));
    CHECK(vbar1(ph100, -1.7) == vbar1(ph100, 1.7));
}

TEST_CASE("gapped magnon spectra") {
    const ExcitationSpectrum mg = magnon_spectrum(0.1);
    CHECK(vbar0(mg, 0.05) == 0.0);
    CHECK(vbar0(mg, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(vbar0(mg, -0.2) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(vbar2(mg, 0.2) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(vbar2(mg, 0.05) == 0.0);
}

TEST_CASE("parity and positivity over all presets") {
    const ExcitationSpectrum specs[] = {
        phonon_spectrum(), magnon_spectrum(0.1), coulomb_spectrum(),
        custom_spectrum(0.5, 1.0, 0.0), custom_spectrum(2.0, 1.0, 0.0)};
    auto rng = bloch::testing::seeded_rng(1);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    for (const auto& spec : specs) {
        for (int k = 0; k < 100; ++k) {
            const double u = uni(rng);
            CHECK(vbar0(spec, -u) == -vbar0(spec, u));
            CHECK(vbar2(spec, -u) == -vbar2(spec, u));
            CHECK(vbar1(spec, -u) == vbar1(spec, u));
            if (u > 0.0) CHECK(vbar0(spec, u) >= 0.0);
        }
    }
}

TEST_CASE("phonon ratio vbar2/vbar0 = u^2/2") {
    const ExcitationSpectrum ph = phonon_spectrum();
    for (double u : {0.3, 1.0, 2.5, -4.0})
        CHECK(vbar2(ph, u) / vbar0(ph, u) == doctest::Approx(0.5 * u * u).epsilon(1e-13));
}

TEST_CASE("exponent consistency for custom spectra") {
    for (auto [alpha, beta] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.5},
                               std::pair{1.5, 0.0}}) {
        const ExcitationSpectrum spec = custom_spectrum(alpha, beta, 0.0);
        const double expected = 2.0 / alpha + beta - 1.0;
        for (double u : {2.0, 4.0, 8.0})
            CHECK(std::log(std::abs(vbar0(spec, u))) / std::log(u) ==
                  doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("coulomb preset is linear with vbar2 = vbar0") {
    const ExcitationSpectrum cl = coulomb_spectrum();
    CHECK(vbar0(cl, 0.25) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(vbar2(cl, 0.25) == vbar0(cl, 0.25));
    CHECK(vbar2(cl, -1.5) == vbar0(cl, -1.5));
}

TEST_CASE("omega0 scaling enters through the energy ratio") {
    const ExcitationSpectrum ph2 = phonon_spectrum({2.0, 100.0});
    CHECK(vbar0(ph2, 4.0) == doctest::Approx(4.0).epsilon(1e-14));  // (u/omega0)^2
    CHECK(ph2.scales.eps_fermi() == doctest::Approx(200.0));
}

TEST_CASE("spectrum validation") {
    CHECK_THROWS_AS(magnon_spectrum(0.0), std::invalid_argument);
    CHECK_THROWS_AS(custom_spectrum(0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(custom_spectrum(1.0, -0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(phonon_spectrum({0.0, 100.0}), std::invalid_argument);
    CHECK_THROWS_AS(phonon_spectrum({1.0, 0.5}), std::invalid_argument);
    CHECK(scale_warning({1.0, 5.0}).size() > 0);
    CHECK(scale_warning({1.0, 100.0}).empty());
    CHECK(custom_spectrum(2.0, 0.0, 0.0).rate0_divergent());
    CHECK_FALSE(phonon_spectrum().rate0_divergent());
}
