#include "bloch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bloch {

SpectrumResult eigendecompose(const Eigen::MatrixXd& sym_matrix,
                              const MeasureWeights& measure) {
    const int n = static_cast<int>(sym_matrix.rows());
    if (sym_matrix.cols() != n)
        throw std::invalid_argument("eigendecompose: matrix must be square");
    if (static_cast<int>(measure.values.size()) != n)
        throw std::invalid_argument("eigendecompose: measure size mismatch");
    const double scale = sym_matrix.cwiseAbs().maxCoeff();
    const double asym = (sym_matrix - sym_matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale)
        throw std::invalid_argument("eigendecompose: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym_matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: eigensolver failed");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& raw = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double aa = std::abs(raw(a)), ab = std::abs(raw(b));
        if (aa != ab) return aa > ab;
        return raw(a) > raw(b);
    });

    SpectrumResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        result.eigenvalues(k) = raw(order[k]);
        // Back-transform to the measure space: orthonormal under sum m_i u v.
        Eigen::VectorXd column = solver.eigenvectors().col(order[k]);
        for (int i = 0; i < n; ++i) column(i) /= std::sqrt(measure.values[i]);
        // Deterministic sign: positive mean for e0, largest entry positive
        // otherwise.
        double pivot = column.mean();
        if (k > 0) {
            int imax = 0;
            column.cwiseAbs().maxCoeff(&imax);
            pivot = column(imax);
        }
        if (pivot < 0.0) column = -column;
        result.eigenvectors.col(k) = column;
    }

    result.gap = n > 1 ? std::abs(result.eigenvalues(1)) : 0.0;
    result.hs_norm = sym_matrix.norm();
    result.unit_multiplicity = 0;
    for (int k = 0; k < n; ++k)
        if (std::abs(result.eigenvalues(k) - 1.0) <= 1e-4) ++result.unit_multiplicity;
    return result;
}

double spectral_gap(const SpectrumResult& result) { return result.gap; }

CollisionSpectrum collision_spectrum(const SpectrumResult& result) {
    const int n = static_cast<int>(result.eigenvalues.size());
    CollisionSpectrum cs;
    cs.shifted = result.eigenvalues.array() - 1.0;
    for (int k = 0; k < n; ++k)
        if (std::abs(cs.shifted(k)) <= 1e-4) ++cs.zero_count;

    std::ostringstream note;
    cs.ok = true;
    if (std::abs(cs.shifted(0)) > 1e-8) {
        cs.ok = false;
        note << "zero mode off by " << cs.shifted(0) << "; ";
    }
    if (cs.zero_count != 1) {
        cs.ok = false;
        note << "zero eigenvalue multiplicity " << cs.zero_count << " (expected 1); ";
    }
    for (int k = 1; k < n; ++k) {
        const double v = cs.shifted(k);
        if (!(v > -2.0 && v < 0.0)) {
            cs.ok = false;
            note << "eigenvalue " << k << " shifted to " << v << " outside (-2, 0); ";
            break;
        }
    }
    cs.note = note.str();
    return cs;
}

}  // namespace bloch
