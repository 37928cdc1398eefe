#pragma once

#include <cmath>
#include <random>

#include "bloch/operators.hpp"
#include "bloch/quadrature.hpp"
#include "bloch/spectra.hpp"

namespace bloch::testing {

inline double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

/// Shared fixtures; built once, reused across test cases.
inline const Grid& grid400() {
    static const Grid grid = build_grid(400, 40.0);
    return grid;
}

inline const ExcitationSpectrum& phonon() {
    static const ExcitationSpectrum spec = phonon_spectrum();
    return spec;
}

inline const OperatorSet& phonon_ops400() {
    static const OperatorSet ops = build_operator_set(grid400(), phonon(), 0.01);
    return ops;
}

/// Odd zeta-like series sum_k (2k+1)^-s, the independent oracle for the
/// closed-form rate constants.
inline double odd_series(double s) {
    double sum = 0.0;
    for (int k = 0; k < 4000000; ++k) {
        const double term = std::pow(2.0 * k + 1.0, -s);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

inline std::mt19937 seeded_rng(unsigned salt = 0) { return std::mt19937(987654321u + salt); }

}  // namespace bloch::testing
