#pragma once

#include <span>
#include <vector>

namespace bloch {

/// Symmetric quadrature grid in the dimensionless energy x = eps / T.
/// Nodes are strictly increasing, come in exact +/- pairs, and carry
/// positive composite Gauss-Legendre weights.
struct Grid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double x_max = 0.0;

    int n() const { return static_cast<int>(nodes.size()); }
};

/// Thermal weight w(x) = 1/(4 cosh^2(x/2)). Even, positive, maximum 1/4 at
/// x = 0; returns 0 for |x| > 1400 (underflow guard).
double weight_w(double x);

/// log of weight_w, valid for all x (no underflow).
double log_weight_w(double x);

/// Fermi function 1/(e^x + 1), overflow-safe.
double fermi(double x);

/// Bose function 1/(e^x - 1), overflow-safe. Throws std::domain_error at
/// x = 0; callers on the kernel path multiply by factors vanishing at the
/// pole and must use the regularized forms instead.
double bose(double x);

/// Composite Gauss-Legendre grid on [-x_max, x_max], built as a mirrored
/// half-grid so the node set is exactly closed under negation.
/// Requires n >= 16 even and x_max >= 10.
Grid build_grid(int n, double x_max);

/// Quadrature sum over the grid with fixed ascending summation order.
double integrate(std::span<const double> values, const Grid& grid);

/// Normalized thermal average <v>_w = sum q w v / sum q w.
double weighted_average(std::span<const double> values, const Grid& grid);

/// Index pairing of the symmetric grid: nodes[mirror(i)] == -nodes[i].
inline int mirror_index(const Grid& grid, int i) { return grid.n() - 1 - i; }

}  // namespace bloch
