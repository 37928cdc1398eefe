#pragma once

#include <stdexcept>
#include <string>

namespace bloch {

/// Requested evaluation lies outside the validity regime of the model
/// (temperature above the enforced bound, below a spectral gap, or a
/// spectrum whose single-particle rate is infrared-divergent).
class RegimeError : public std::runtime_error {
  public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed to reach its accuracy target
/// (quadrature non-convergence, singular linear system, diverging series).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bloch
