#pragma once

#include <Eigen/Dense>

#include "bloch/kernels.hpp"
#include "bloch/quadrature.hpp"
#include "bloch/spectra.hpp"

namespace bloch {

/// Discrete measure weights m_i = w(x_i) * gamma0_i * q_i defining the scalar
/// product <phi|psi> = sum m_i phi_i psi_i in which K0 and K2 are self-adjoint
/// and K1 skew-adjoint. gamma0 here is the grid-consistent value (the raw
/// quadrature row sum of the reduced kernel), which makes the renormalized K0
/// exactly bistochastic with respect to m.
struct MeasureWeights {
    std::vector<double> values;
};

/// Nystrom matrix of one kernel K_nu at fixed temperature, with entries
/// K_nu(x_i, x_j) * q_j and rows jointly renormalized by the raw K0 row sums
/// so the constant vector is an exact fixed point of K0.
struct DiscretizedKernel {
    Eigen::MatrixXd matrix;
    int nu = 0;
    double temperature = 0.0;
    ExcitationSpectrum spec;
    Grid grid;
    /// Raw reduced-kernel row integrals (grid quadrature) for nu = 0; the
    /// renormalization denominators.
    std::vector<double> gamma0_grid;
    /// Largest deviation of the raw K0 row sums from 1 when normalized by the
    /// adaptive-quadrature rate (diagnostic, recorded before renormalization).
    double max_raw_rowsum_dev = 0.0;
};

/// The three kernels plus everything the solvers need, assembled in one pass.
/// For ungapped spectra the matrices k0/n1/n2 and the rate row-sums are
/// temperature independent; k1 and k2 are recovered as t1(T)*n1 and t2(T)*n2.
struct OperatorSet {
    Grid grid;
    ExcitationSpectrum spec;
    double temperature = 0.0;

    Eigen::MatrixXd k0;  // renormalized, row sums exactly 1
    Eigen::MatrixXd n1;  // K1 / t1, same renormalization as k0
    Eigen::MatrixXd n2;  // K2 / t2, same renormalization as k0
    double t1 = 0.0;     // K1 scale: T / (2 eps_F)
    double t2 = 0.0;     // K2 scale: (T/omega0)^(2/alpha)/2, or 1 for coulomb

    /// Grid-quadrature row integrals of the reduced kernels (dimensionless).
    Eigen::VectorXd gamma0_grid, gamma1_grid, gamma2_grid;
    MeasureWeights measure;

    Eigen::MatrixXd k1() const { return t1 * n1; }
    Eigen::MatrixXd k2() const { return t2 * n2; }
};

OperatorSet build_operator_set(const Grid& grid, const ExcitationSpectrum& spec,
                               double T);

/// Single-kernel assembly (wraps build_operator_set; K1/K2 carry the K0 row
/// renormalization factors).
DiscretizedKernel assemble(int nu, const Grid& grid, const ExcitationSpectrum& spec,
                           double T);

MeasureWeights measure_weights(const OperatorSet& ops);

/// Similarity transform of K0 by sqrt(w gamma0 q): returns the symmetric
/// matrix with the same spectrum, built from the manifestly symmetric kernel
/// form so the result is symmetric to machine precision. The one- and
/// two-argument forms differ in the gamma0 weights:
///  - symmetrize(ops/k0): grid-consistent row-sum weights; exactly similar to
///    the renormalized Nystrom K0 (unit top eigenvalue to machine precision).
///  - symmetrize(k0, rates): adaptive-quadrature rate weights; exactly similar
///    to the raw (un-renormalized) Nystrom matrix, and its Frobenius norm is a
///    smooth-quadrature estimate of the kernel's Hilbert-Schmidt norm, stable
///    under grid and cutoff changes.
Eigen::MatrixXd symmetrize(const OperatorSet& ops);
Eigen::MatrixXd symmetrize(const DiscretizedKernel& k0);
Eigen::MatrixXd symmetrize(const DiscretizedKernel& k0, const RateTable& rates);

/// Frobenius norm of the adaptive-weight symmetrization (the discrete
/// Hilbert-Schmidt norm of the symmetrized kernel).
double hilbert_schmidt_norm(const Grid& grid, const ExcitationSpectrum& spec, double T,
                            double rel_tol = 1e-10);

/// Exact parity projections using the +/- node pairing of the grid.
void even_odd_project(std::span<const double> values, const Grid& grid,
                      std::vector<double>& even, std::vector<double>& odd);

struct ParityBlocks {
    Eigen::MatrixXd pp, pm, mp, mm;  // P+ K P+, P+ K P-, P- K P+, P- K P-
};

ParityBlocks parity_blocks(const Eigen::MatrixXd& kernel, const Grid& grid);

/// Restriction of a parity-preserving matrix to the odd subspace,
/// parametrized by the values on the positive nodes.
Eigen::MatrixXd odd_block(const Eigen::MatrixXd& kernel, const Grid& grid);

/// CSV dump of a kernel matrix (header: n, x_max, nu, T; then row-major rows).
void dump_kernel_csv(const DiscretizedKernel& kernel, const std::string& path);

}  // namespace bloch
