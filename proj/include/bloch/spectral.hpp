#pragma once

#include <Eigen/Dense>
#include <string>

#include "bloch/operators.hpp"

namespace bloch {

/// Eigenstructure of the symmetrized kernel. Eigenvalues are sorted by
/// decreasing |lambda|; eigenvectors are back-transformed (divided
/// componentwise by sqrt(m_i)) so they are orthonormal in the measure
/// product, with e0 scaled to positive mean.
struct SpectrumResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // columns, measure-orthonormal
    double gap = 0.0;              // lambda_* = max |lambda_n|, n >= 1
    double hs_norm = 0.0;          // Frobenius norm of the symmetric matrix
    /// Number of eigenvalues within 1e-4 of 1 (expected: exactly one).
    int unit_multiplicity = 0;
};

/// Full symmetric eigendecomposition. Throws std::invalid_argument when the
/// input is not symmetric (relative tolerance 1e-10).
SpectrumResult eigendecompose(const Eigen::MatrixXd& sym_matrix,
                              const MeasureWeights& measure);

double spectral_gap(const SpectrumResult& result);

/// Spectrum of the collision operator K0 - 1: one zero eigenvalue, all others
/// in (-2, 0). Violations are reported in `ok`/`note`, not thrown.
struct CollisionSpectrum {
    Eigen::VectorXd shifted;  // lambda_n - 1, same ordering as the input
    int zero_count = 0;       // eigenvalues within 1e-4 of zero
    bool ok = false;
    std::string note;
};

CollisionSpectrum collision_spectrum(const SpectrumResult& result);

}  // namespace bloch
