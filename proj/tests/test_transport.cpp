#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bloch/io.hpp"
#include "bloch/transport.hpp"
#include "test_helpers.hpp"

using namespace bloch;
using bloch::testing::grid400;
using bloch::testing::phonon;
using bloch::testing::rel_err;

namespace {

SolutionPhi constant_phi(double c, const Grid& grid, double t = 0.01) {
    SolutionPhi phi;
    phi.temperature = t;
    phi.values.assign(grid.n(), c);
    even_odd_project(phi.values, grid, phi.even_part, phi.odd_part);
    return phi;
}

}  // namespace

TEST_CASE("relaxation time basics") {
    const Grid& grid = grid400();
    CHECK(rel_err(relaxation_time(constant_phi(3.0, grid), grid), 1.5) < 1e-10);

    SolutionPhi odd = constant_phi(0.0, grid);
    double scale = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        odd.values[i] = grid.nodes[i];
        scale += std::abs(grid.weights[i] * weight_w(grid.nodes[i]) * grid.nodes[i]);
    }
    CHECK(std::abs(relaxation_time(odd, grid)) < 1e-15 * scale);

    // linearity
    SolutionPhi a = constant_phi(2.0, grid), b = constant_phi(0.0, grid);
    for (int i = 0; i < grid.n(); ++i) b.values[i] = weight_w(grid.nodes[i]);
    SolutionPhi combo = constant_phi(0.0, grid);
    for (int i = 0; i < grid.n(); ++i)
        combo.values[i] = 3.0 * a.values[i] - 0.5 * b.values[i];
    CHECK(rel_err(relaxation_time(combo, grid),
                  3.0 * relaxation_time(a, grid) - 0.5 * relaxation_time(b, grid)) <
          1e-12);

    SolutionPhi wrong;
    wrong.values.assign(10, 1.0);
    CHECK_THROWS_AS(relaxation_time(wrong, grid), std::invalid_argument);
}

TEST_CASE("conductivity convention sigma = tau") {
    for (double tau : {3.0, 0.0, 1e8}) CHECK(conductivity(tau) == tau);
}

TEST_CASE("temperature ladder") {
    const auto log8 = temperature_ladder(0.002, 0.02, 8);
    CHECK(log8.size() == 8);
    CHECK(log8.front() == doctest::Approx(0.002).epsilon(1e-15));
    CHECK(log8.back() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(rel_err(log8[1] / log8[0], log8[7] / log8[6]) < 1e-12);

    const auto lin3 = temperature_ladder(1.0, 2.0, 3, false);
    CHECK(lin3[1] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(temperature_ladder(0.01, 0.02, 1).size() == 1);
    CHECK_THROWS_AS(temperature_ladder(0.0, 1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(temperature_ladder(2.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("power-law fit") {
    std::vector<TransportPoint> points;
    for (double t : {0.002, 0.004, 0.008, 0.016, 0.032}) {
        TransportPoint p;
        p.temperature = t;
        p.sigma = std::pow(t, -5.0);
        p.tau = p.sigma;
        p.ok = true;
        points.push_back(p);
    }
    const FitResult fit = fit_power_law(points);
    CHECK(std::abs(fit.exponent + 5.0) < 1e-10);
    CHECK(fit.stderr_ < 1e-10);
    CHECK(fit.n_points == 5);

    points.pop_back();
    CHECK_THROWS_AS(fit_power_law(points), std::invalid_argument);
    points.push_back(points.back());
    points.back().sigma = -1.0;
    CHECK_THROWS_AS(fit_power_law(points), std::invalid_argument);
}

TEST_CASE("phonon sweep reproduces the T^-5 law with every method") {
    const auto ladder = temperature_ladder(0.002, 0.02, 8);
    for (Method m : {Method::direct, Method::leading_order, Method::averaged}) {
        const SweepResult res = sweep(phonon(), m, ladder, grid400(), {}, 0);
        REQUIRE(res.fit_ok);
        CHECK(res.points.size() == 8);
        for (const auto& p : res.points) {
            CHECK(p.ok);
            CHECK(p.tau > 0.0);
            CHECK(p.sigma == p.tau);
        }
        CHECK(std::abs(res.fit.exponent + 5.0) < 0.05);
    }
}

TEST_CASE("sweep records per-point regime failures and continues") {
    const ExcitationSpectrum mg = magnon_spectrum(0.01);
    auto ladder = temperature_ladder(0.02, 0.2, 7);
    ladder.push_back(0.005);  // below the gap
    const SweepResult res = sweep(mg, Method::leading_order, ladder, grid400(), {}, 0);
    CHECK(res.points.size() == 8);
    int failures = 0;
    for (const auto& p : res.points) {
        if (!p.ok) {
            ++failures;
            CHECK(p.temperature == 0.005);
            CHECK(p.error.find("gap") != std::string::npos);
        }
    }
    CHECK(failures == 1);
    CHECK(res.fit_ok);
    CHECK(std::abs(res.fit.exponent + 2.0) < 0.1);
}

TEST_CASE("fit refuses when fewer than five points succeed") {
    const ExcitationSpectrum mg = magnon_spectrum(0.01);
    const std::vector<double> ladder{0.002, 0.004, 0.006, 0.03, 0.05, 0.08, 0.12};
    const SweepResult res = sweep(mg, Method::averaged, ladder, grid400(), {}, 0);
    CHECK_FALSE(res.fit_ok);
    CHECK(res.fit_error.find("5") != std::string::npos);
}

TEST_CASE("sweep output is identical for any thread count") {
    const auto ladder = temperature_ladder(0.002, 0.02, 8);
    const SweepResult serial =
        sweep(phonon(), Method::leading_order, ladder, grid400(), {}, 1);
    const SweepResult parallel =
        sweep(phonon(), Method::leading_order, ladder, grid400(), {}, 4);
    CHECK(sweep_csv(serial) == sweep_csv(parallel));
    CHECK(sweep_json(serial) == sweep_json(parallel));

    // environment cap is honored without changing results
    setenv("BLOCH_KINETICS_THREADS", "2", 1);
    const SweepResult capped =
        sweep(phonon(), Method::leading_order, ladder, grid400(), {}, 0);
    unsetenv("BLOCH_KINETICS_THREADS");
    CHECK(sweep_csv(capped) == sweep_csv(serial));
}

TEST_CASE("generalized excitation exponents follow the dispersion dichotomy") {
    const Grid& grid = grid400();

    const SweepResult coulomb = sweep(coulomb_spectrum(), Method::leading_order,
                                      temperature_ladder(0.002, 0.02, 8), grid, {}, 0);
    CHECK(std::abs(coulomb.fit.exponent + 2.0) < 0.05);

    const SweepResult magnon =
        sweep(magnon_spectrum(0.01), Method::leading_order,
              temperature_ladder(0.02, 0.2, 8), grid, {}, 0);
    CHECK(std::abs(magnon.fit.exponent + 2.0) < 0.1);

    // alpha < 1: the K1 channel controls the exponent -(2/alpha + beta + 2)
    const SweepResult steep =
        sweep(custom_spectrum(0.5, 1.0, 0.0), Method::leading_order,
              temperature_ladder(1e-5, 1e-4, 8), grid, {}, 0);
    CHECK(std::abs(steep.fit.exponent + 7.0) < 0.1);
    const SweepResult steep0 =
        sweep(custom_spectrum(0.5, 0.0, 0.0), Method::leading_order,
              temperature_ladder(1e-5, 1e-4, 8), grid, {}, 0);
    CHECK(std::abs(steep0.fit.exponent + 6.0) < 0.1);

    // alpha > 1: the Gamma2 channel controls the exponent -(4/alpha + beta)
    const SweepResult shallow1 =
        sweep(custom_spectrum(2.0, 1.0, 0.0), Method::leading_order,
              temperature_ladder(0.002, 0.02, 8), grid, {}, 0);
    CHECK(std::abs(shallow1.fit.exponent + 3.0) < 0.1);
    const SweepResult shallow0 =
        sweep(custom_spectrum(2.0, 0.0, 0.0), Method::averaged,
              temperature_ladder(0.002, 0.02, 8), grid, {}, 0);
    CHECK(std::abs(shallow0.fit.exponent + 2.0) < 0.1);
}

TEST_CASE("tau is grid-converged") {
    const double tau1 =
        relaxation_time(solve_leading_order(0.01, phonon(), grid400()), grid400());
    const Grid fine = build_grid(800, 50.0);
    const double tau2 =
        relaxation_time(solve_leading_order(0.01, phonon(), fine), fine);
    CHECK(rel_err(tau2, tau1) < 1e-4);
}
