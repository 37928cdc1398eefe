#include "bloch/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "bloch/errors.hpp"

namespace bloch {

OperatorSet build_operator_set(const Grid& grid, const ExcitationSpectrum& spec,
                               double T) {
    if (!(T > 0.0)) throw RegimeError("operators: temperature must be positive");
    const double omega0 = spec.scales.omega0;
    if (spec.gapped() && T <= spec.gap * omega0)
        throw RegimeError("operators: T must exceed the spectral gap");
    if (spec.rate0_divergent())
        throw RegimeError(
            "operators: K0 is not normalizable for an infrared-divergent "
            "single-particle rate; only the averaged-rate solver applies");

    const int n = grid.n();
    OperatorSet ops;
    ops.grid = grid;
    ops.spec = spec;
    ops.temperature = T;
    ops.t1 = rate_prefactor(1, spec, T) / rate_prefactor(0, spec, T);
    ops.t2 = rate_prefactor(2, spec, T) / rate_prefactor(0, spec, T);

    ops.k0.resize(n, n);
    ops.n1.resize(n, n);
    ops.n2.resize(n, n);
    ops.gamma0_grid.resize(n);
    ops.gamma1_grid.resize(n);
    ops.gamma2_grid.resize(n);

    const double p0 = spec.exponent0();
    const double q2 = 2.0 / spec.alpha;
    const bool coulomb = spec.kind == ExcitationKind::coulomb;
    const double gap_y = spec.gapped() ? spec.gap * omega0 / T : 0.0;

    // One pass per row: the three reduced kernels share the occupation factor.
    for (int i = 0; i < n; ++i) {
        const double xi = grid.nodes[i];
        double sum0 = 0.0, sum1 = 0.0, sum2 = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) {
                ops.k0(i, j) = ops.n1(i, j) = ops.n2(i, j) = 0.0;
                continue;
            }
            const double y = grid.nodes[j] - xi;
            const double ay = std::abs(y);
            if (ay < gap_y) {
                ops.k0(i, j) = ops.n1(i, j) = ops.n2(i, j) = 0.0;
                continue;
            }
            const double combo = stable_combo(xi, y);
            const double sy = y > 0.0 ? 1.0 : -1.0;
            const double kap0 = combo * sy * std::pow(ay, p0);
            const double kap1 = kap0 * y;
            const double kap2 = coulomb ? kap0 : kap0 * std::pow(ay, q2);
            const double qj = grid.weights[j];
            ops.k0(i, j) = kap0 * qj;
            ops.n1(i, j) = kap1 * qj;
            ops.n2(i, j) = kap2 * qj;
            sum0 += ops.k0(i, j);
            sum1 += ops.n1(i, j);
            sum2 += ops.n2(i, j);
        }
        ops.gamma0_grid(i) = sum0;
        ops.gamma1_grid(i) = sum1;
        ops.gamma2_grid(i) = sum2;
        // Row renormalization: the constant vector becomes an exact fixed
        // point of K0, and K1/K2 share the 1/Gamma0 factor.
        const double inv = 1.0 / sum0;
        ops.k0.row(i) *= inv;
        ops.n1.row(i) *= inv;
        ops.n2.row(i) *= inv;
    }

    ops.measure.values.resize(n);
    for (int i = 0; i < n; ++i)
        ops.measure.values[i] =
            weight_w(grid.nodes[i]) * ops.gamma0_grid(i) * grid.weights[i];
    return ops;
}

MeasureWeights measure_weights(const OperatorSet& ops) { return ops.measure; }

DiscretizedKernel assemble(int nu, const Grid& grid, const ExcitationSpectrum& spec,
                           double T) {
    if (nu < 0 || nu > 2)
        throw std::invalid_argument("assemble: kernel index nu must be 0, 1 or 2");
    OperatorSet ops = build_operator_set(grid, spec, T);

    DiscretizedKernel kernel;
    kernel.nu = nu;
    kernel.temperature = T;
    kernel.spec = spec;
    kernel.grid = grid;
    kernel.gamma0_grid.assign(ops.gamma0_grid.data(), ops.gamma0_grid.data() + grid.n());
    switch (nu) {
        case 0: kernel.matrix = std::move(ops.k0); break;
        case 1: kernel.matrix = ops.t1 * ops.n1; break;
        case 2: kernel.matrix = ops.t2 * ops.n2; break;
    }

    // Raw row-sum deviation against the adaptive-quadrature rate.
    double dev = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        const double exact = gamma_nu(0, grid.nodes[i], spec, T);
        dev = std::max(dev, std::abs(ops.gamma0_grid(i) / exact - 1.0));
    }
    kernel.max_raw_rowsum_dev = dev;
    return kernel;
}

namespace {

Eigen::MatrixXd symmetrize_impl(const Grid& grid, const ExcitationSpectrum& spec,
                                double T, const double* gamma0_grid) {
    const int n = grid.n();
    const double p0 = spec.exponent0();
    const double omega0 = spec.scales.omega0;
    const double gap_y = spec.gapped() ? spec.gap * omega0 / T : 0.0;

    Eigen::VectorXd scale(n);
    for (int i = 0; i < n; ++i)
        scale(i) = std::sqrt(grid.weights[i] / gamma0_grid[i]);

    // sqrt(w(x)/w(u)) K0(x,u) collapses to a function of |u - x| alone, so the
    // entries are symmetric by evaluation.
    Eigen::MatrixXd sym(n, n);
    for (int i = 0; i < n; ++i) {
        sym(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double ay = std::abs(grid.nodes[j] - grid.nodes[i]);
            double value = 0.0;
            if (ay >= gap_y && ay > 0.0)
                value = std::pow(ay, p0) / (2.0 * std::sinh(0.5 * ay)) * scale(i) *
                        scale(j);
            sym(i, j) = value;
            sym(j, i) = value;
        }
    }
    return sym;
}

}  // namespace

Eigen::MatrixXd symmetrize(const OperatorSet& ops) {
    return symmetrize_impl(ops.grid, ops.spec, ops.temperature,
                           ops.gamma0_grid.data());
}

Eigen::MatrixXd symmetrize(const DiscretizedKernel& k0) {
    if (k0.nu != 0)
        throw std::invalid_argument("symmetrize: expects the nu = 0 kernel");
    return symmetrize_impl(k0.grid, k0.spec, k0.temperature, k0.gamma0_grid.data());
}

Eigen::MatrixXd symmetrize(const DiscretizedKernel& k0, const RateTable& rates) {
    if (k0.nu != 0)
        throw std::invalid_argument("symmetrize: expects the nu = 0 kernel");
    if (static_cast<int>(rates.gamma0.size()) != k0.grid.n())
        throw std::invalid_argument("symmetrize: rate table does not match grid");
    return symmetrize_impl(k0.grid, k0.spec, k0.temperature, rates.gamma0.data());
}

double hilbert_schmidt_norm(const Grid& grid, const ExcitationSpectrum& spec, double T,
                            double rel_tol) {
    const int n = grid.n();
    std::vector<double> gamma0(n);
    for (int i = 0; i < n; ++i)
        gamma0[i] = gamma_nu(0, grid.nodes[i], spec, T, rel_tol);
    return symmetrize_impl(grid, spec, T, gamma0.data()).norm();
}

void even_odd_project(std::span<const double> values, const Grid& grid,
                      std::vector<double>& even, std::vector<double>& odd) {
    const int n = grid.n();
    if (static_cast<int>(values.size()) != n)
        throw std::invalid_argument("even_odd_project: length mismatch with grid");
    even.resize(n);
    odd.resize(n);
    for (int i = 0; i < n; ++i) {
        const double a = values[i];
        const double b = values[n - 1 - i];
        even[i] = 0.5 * (a + b);
        odd[i] = a - even[i];  // even + odd reproduces the input exactly
    }
}

ParityBlocks parity_blocks(const Eigen::MatrixXd& kernel, const Grid& grid) {
    const int n = grid.n();
    if (kernel.rows() != n || kernel.cols() != n)
        throw std::invalid_argument("parity_blocks: matrix does not match grid");
    for (int i = 0; i < n / 2; ++i)
        if (grid.nodes[i] != -grid.nodes[n - 1 - i])
            throw std::invalid_argument("parity_blocks: grid is not symmetric");

    const Eigen::MatrixXd kr = kernel.rowwise().reverse();
    const Eigen::MatrixXd rk = kernel.colwise().reverse();
    const Eigen::MatrixXd rkr = kernel.reverse();

    ParityBlocks blocks;
    blocks.pp = 0.25 * (kernel + kr + rk + rkr);
    blocks.pm = 0.25 * (kernel - kr + rk - rkr);
    blocks.mp = 0.25 * (kernel + kr - rk - rkr);
    blocks.mm = 0.25 * (kernel - kr - rk + rkr);
    return blocks;
}

Eigen::MatrixXd odd_block(const Eigen::MatrixXd& kernel, const Grid& grid) {
    const int n = grid.n();
    const int m = n / 2;
    Eigen::MatrixXd block(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            block(a, b) = kernel(m + a, m + b) - kernel(m + a, n - 1 - (m + b));
    return block;
}

}  // namespace bloch
