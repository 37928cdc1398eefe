#include <doctest.h>

#include <cmath>
#include <vector>

#include "bloch/quadrature.hpp"
#include "test_helpers.hpp"

using namespace bloch;
using bloch::testing::grid400;
using bloch::testing::rel_err;

namespace {

double integrate_wx2(const Grid& grid) {
    std::vector<double> values(grid.n());
    for (int i = 0; i < grid.n(); ++i)
        values[i] = weight_w(grid.nodes[i]) * grid.nodes[i] * grid.nodes[i];
    return integrate(values, grid);
}

}  // namespace

TEST_CASE("thermal weight function") {
    CHECK(weight_w(0.0) == 0.25);
    const double c = std::cosh(1.0);
    CHECK(weight_w(2.0) == doctest::Approx(1.0 / (4.0 * c * c)).epsilon(1e-14));
    CHECK(weight_w(5.0) == weight_w(-5.0));
    CHECK(weight_w(1500.0) == 0.0);
    CHECK(std::exp(log_weight_w(3.7)) == doctest::Approx(weight_w(3.7)).epsilon(1e-14));

    auto rng = bloch::testing::seeded_rng(2);
    std::uniform_real_distribution<double> uni(-30.0, 30.0);
    for (int k = 0; k < 100; ++k) {
        const double x = uni(rng);
        // 1 - fermi(x) = fermi(-x), the cancellation-free form of the identity
        CHECK(rel_err(weight_w(x), fermi(x) * fermi(-x)) < 1e-12);
    }
}

TEST_CASE("fermi and bose functions") {
    CHECK(fermi(0.0) == 0.5);
    CHECK(bose(1.0) == doctest::Approx(1.0 / (M_E - 1.0)).epsilon(1e-14));
    CHECK(fermi(1.0) + bose(1.0) ==
          doctest::Approx(1.0 / std::sinh(1.0)).epsilon(1e-14));
    CHECK(fermi(800.0) >= 0.0);
    CHECK(fermi(800.0) < 1e-300);
    CHECK(fermi(-800.0) == 1.0);
    CHECK(fermi(3.0) + fermi(-3.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bose(2.0) > 0.0);
    CHECK(bose(-2.0) < -1.0);
    CHECK_THROWS_AS(bose(0.0), std::domain_error);
}

TEST_CASE("grid construction and preconditions") {
    CHECK_THROWS_AS(build_grid(15, 40.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(18, 9.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(14, 40.0), std::invalid_argument);

    const Grid& grid = grid400();
    CHECK(grid.n() == 400);
    for (int i = 1; i < grid.n(); ++i) CHECK(grid.nodes[i] > grid.nodes[i - 1]);
    for (int i = 0; i < grid.n(); ++i) {
        CHECK(grid.weights[i] > 0.0);
        CHECK(grid.nodes[i] == -grid.nodes[mirror_index(grid, i)]);
        CHECK(grid.weights[i] == grid.weights[mirror_index(grid, i)]);
    }
    CHECK(grid.nodes.front() > -grid.x_max);
    CHECK(grid.nodes.back() < grid.x_max);

    const Grid small = build_grid(16, 10.0);
    CHECK(small.n() == 16);
}

TEST_CASE("grid integrates the thermal weight to 1") {
    const Grid& grid = grid400();
    std::vector<double> values(grid.n());
    for (int i = 0; i < grid.n(); ++i) values[i] = weight_w(grid.nodes[i]);
    // exact antiderivative: tanh(x/2)/2 over [-40, 40]
    const double oracle = std::tanh(20.0);
    CHECK(std::abs(integrate(values, grid) - oracle) < 1e-10);
    CHECK(std::abs(integrate(values, grid) - 1.0) < 1e-10);
}

TEST_CASE("odd sequences integrate to zero by symmetry") {
    const Grid& grid = grid400();
    std::vector<double> values(grid.n());
    double scale = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        values[i] = grid.nodes[i] * weight_w(grid.nodes[i]);
        scale += std::abs(grid.weights[i] * values[i]);
    }
    CHECK(std::abs(integrate(values, grid)) < 1e-15 * scale);
}

TEST_CASE("second moment of the weight equals pi^2/3") {
    const double target = M_PI * M_PI / 3.0;
    CHECK(std::abs(integrate_wx2(grid400()) - target) < 1e-8);
}

TEST_CASE("refinement does not worsen the second moment") {
    const double target = M_PI * M_PI / 3.0;
    double prev = std::abs(integrate_wx2(build_grid(128, 40.0)) - target);
    for (int n : {256, 512}) {
        const double err = std::abs(integrate_wx2(build_grid(n, 40.0)) - target);
        CHECK(err <= prev + 5e-14);
        prev = err;
    }
}

TEST_CASE("integrate basics") {
    const Grid grid = build_grid(64, 12.0);
    std::vector<double> ones(grid.n(), 1.0);
    CHECK(integrate(ones, grid) == doctest::Approx(2.0 * grid.x_max).epsilon(1e-13));
    std::vector<double> wrong(10, 0.0);
    CHECK_THROWS_AS(integrate(wrong, grid), std::invalid_argument);
    CHECK(weighted_average(ones, grid) == doctest::Approx(1.0).epsilon(1e-13));
}
