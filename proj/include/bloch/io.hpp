#pragma once

#include <string>

#include "bloch/operators.hpp"
#include "bloch/solvers.hpp"
#include "bloch/spectral.hpp"
#include "bloch/transport.hpp"

namespace bloch {

/// 17 significant digits; parses back to the identical double.
std::string format_g17(double value);

/// Write-temp-then-rename so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& content);

std::string solution_csv(const SolutionPhi& phi, const Grid& grid);
std::string solution_json(const SolutionPhi& phi, const Grid& grid, double tau);
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);
std::string spectrum_csv(const SpectrumResult& result);
std::string spectrum_json(const SpectrumResult& result);

}  // namespace bloch
