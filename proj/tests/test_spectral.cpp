#include <doctest.h>

#include <cmath>

#include "bloch/spectral.hpp"
#include "test_helpers.hpp"

using namespace bloch;
using bloch::testing::phonon_ops400;
using bloch::testing::rel_err;

namespace {

const SpectrumResult& phonon_spectrum_result() {
    static const SpectrumResult result =
        eigendecompose(symmetrize(phonon_ops400()), phonon_ops400().measure);
    return result;
}

}  // namespace

TEST_CASE("top eigenvalue is 1 with multiplicity one") {
    const SpectrumResult& sr = phonon_spectrum_result();
    CHECK(std::abs(sr.eigenvalues(0) - 1.0) < 1e-8);
    CHECK(sr.unit_multiplicity == 1);
    CHECK(std::abs(sr.eigenvalues(1)) < 1.0);
    CHECK(sr.eigenvalues.minCoeff() > -1.0);
}

TEST_CASE("zero-mode eigenvector is the constant function") {
    const SpectrumResult& sr = phonon_spectrum_result();
    const Grid& grid = phonon_ops400().grid;
    double mean = 0.0;
    int count = 0;
    for (int i = 0; i < grid.n(); ++i)
        if (std::abs(grid.nodes[i]) <= 30.0) {
            mean += sr.eigenvectors(i, 0);
            ++count;
        }
    mean /= count;
    CHECK(mean > 0.0);  // sign convention: positive mean
    double var = 0.0;
    for (int i = 0; i < grid.n(); ++i)
        if (std::abs(grid.nodes[i]) <= 30.0) {
            const double d = sr.eigenvectors(i, 0) - mean;
            var += d * d;
        }
    CHECK(std::sqrt(var / count) / std::abs(mean) < 1e-6);
}

TEST_CASE("eigenvectors are orthonormal in the measure product") {
    const SpectrumResult& sr = phonon_spectrum_result();
    const auto& m = phonon_ops400().measure.values;
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd gram =
        sr.eigenvectors.transpose() *
        Eigen::Map<const Eigen::VectorXd>(m.data(), n).asDiagonal() * sr.eigenvectors;
    gram -= Eigen::MatrixXd::Identity(n, n);
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("spectral reconstruction of the operator action") {
    const SpectrumResult& sr = phonon_spectrum_result();
    const OperatorSet& ops = phonon_ops400();
    const int n = ops.grid.n();
    const auto& m = ops.measure.values;
    auto rng = bloch::testing::seeded_rng(8);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gauss(rng);
        Eigen::VectorXd recon = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) {
            double coeff = 0.0;
            for (int i = 0; i < n; ++i) coeff += m[i] * sr.eigenvectors(i, k) * v(i);
            recon += sr.eigenvalues(k) * coeff * sr.eigenvectors.col(k);
        }
        const Eigen::VectorXd direct = ops.k0 * v;
        CHECK((recon - direct).cwiseAbs().maxCoeff() <
              1e-8 * direct.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("hs_norm matches the eigenvalue sum") {
    const SpectrumResult& sr = phonon_spectrum_result();
    CHECK(rel_err(sr.hs_norm * sr.hs_norm, sr.eigenvalues.squaredNorm()) < 1e-8);
}

TEST_CASE("spectral gap bounds the Rayleigh quotient off the zero mode") {
    const SpectrumResult& sr = phonon_spectrum_result();
    const OperatorSet& ops = phonon_ops400();
    const int n = ops.grid.n();
    const auto& m = ops.measure.values;
    auto dot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += m[i] * a(i) * b(i);
        return s;
    };
    const Eigen::VectorXd e0 = sr.eigenvectors.col(0);
    const double e0_norm2 = dot(e0, e0);
    auto rng = bloch::testing::seeded_rng(9);
    std::normal_distribution<double> gauss;
    const double lambda_star = spectral_gap(sr);
    CHECK(lambda_star < 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gauss(rng);
        v -= (dot(v, e0) / e0_norm2) * e0;
        const double quotient = std::abs(dot(v, ops.k0 * v)) / dot(v, v);
        CHECK(quotient <= lambda_star * (1.0 + 1e-10));
    }
}

TEST_CASE("gap is stable under grid refinement") {
    const SpectrumResult& sr = phonon_spectrum_result();
    const Grid g800 = build_grid(800, 40.0);
    const OperatorSet ops800 =
        build_operator_set(g800, bloch::testing::phonon(), 0.01);
    const SpectrumResult sr800 = eigendecompose(symmetrize(ops800), ops800.measure);
    CHECK(std::abs(sr800.gap - sr.gap) < 1e-3);
}

TEST_CASE("eigenvalue tail accumulates at zero") {
    const SpectrumResult& sr = phonon_spectrum_result();
    const int n = static_cast<int>(sr.eigenvalues.size());
    for (int k = 1; k < n; ++k)
        CHECK(std::abs(sr.eigenvalues(k)) <= std::abs(sr.eigenvalues(k - 1)) + 1e-15);
    CHECK(std::abs(sr.eigenvalues(n / 2)) < 1e-3);
    CHECK(std::abs(sr.eigenvalues(n - 1)) < 1e-6);
}

TEST_CASE("collision spectrum: one zero mode, remainder in (-2, 0)") {
    const CollisionSpectrum cs = collision_spectrum(phonon_spectrum_result());
    CHECK(cs.ok);
    CHECK(cs.zero_count == 1);
    CHECK(std::abs(cs.shifted(0)) < 1e-8);
    for (int k = 1; k < cs.shifted.size(); ++k) {
        CHECK(cs.shifted(k) < 0.0);
        CHECK(cs.shifted(k) > -2.0);
    }
}

TEST_CASE("the gap stays below 1 for every preset") {
    const Grid grid = build_grid(96, 20.0);
    struct Case {
        ExcitationSpectrum spec;
        double t;
    };
    const Case cases[] = {{phonon_spectrum(), 0.01},
                          {magnon_spectrum(0.01), 0.05},
                          {coulomb_spectrum(), 0.01},
                          {custom_spectrum(0.5, 1.0, 0.0), 0.01}};
    for (const auto& c : cases) {
        const OperatorSet ops = build_operator_set(grid, c.spec, c.t);
        const SpectrumResult sr = eigendecompose(symmetrize(ops), ops.measure);
        CHECK(std::abs(sr.eigenvalues(0) - 1.0) < 1e-8);
        CHECK(sr.gap < 1.0);
        CHECK(sr.gap > 0.0);
        CHECK(sr.eigenvalues.minCoeff() > -1.0);
    }
}

TEST_CASE("eigendecompose rejects malformed input") {
    Eigen::MatrixXd bad(3, 3);
    bad << 1, 2, 3, 0, 1, 2, 0, 0, 1;
    MeasureWeights m{{1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(eigendecompose(bad, m), std::invalid_argument);
    Eigen::MatrixXd sym = Eigen::MatrixXd::Identity(3, 3);
    MeasureWeights wrong{{1.0, 1.0}};
    CHECK_THROWS_AS(eigendecompose(sym, wrong), std::invalid_argument);
}
