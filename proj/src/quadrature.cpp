#include "bloch/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace bloch {

double weight_w(double x) {
    const double a = std::abs(x);
    if (a > 1400.0) return 0.0;
    const double t = std::exp(-a);
    return t / ((1.0 + t) * (1.0 + t));
}

double log_weight_w(double x) {
    const double a = std::abs(x);
    return -a - 2.0 * std::log1p(std::exp(-a));
}

double fermi(double x) {
    if (x >= 0.0) {
        const double t = std::exp(-x);
        return t / (1.0 + t);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double bose(double x) {
    if (x == 0.0) throw std::domain_error("bose: pole at x = 0");
    return 1.0 / std::expm1(x);
}

namespace {

// Panel orders for one half-grid: m nodes split over ceil(m/16) equal-width
// panels, orders as even as possible (exactly 16 when 16 divides m).
std::vector<int> panel_orders(int m) {
    const int panels = (m + 15) / 16;
    std::vector<int> orders(panels, m / panels);
    int extra = m - panels * (m / panels);
    for (int p = 0; p < extra; ++p) orders[p] += 1;
    return orders;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace

Grid build_grid(int n, double x_max) {
    if (n < 16 || n % 2 != 0)
        throw std::invalid_argument("build_grid: n must be even and >= 16");
    if (x_max < 10.0) throw std::invalid_argument("build_grid: x_max must be >= 10");

    const int m = n / 2;
    const std::vector<int> orders = panel_orders(m);
    const double width = x_max / static_cast<double>(orders.size());

    Grid grid;
    grid.x_max = x_max;
    grid.nodes.reserve(n);
    grid.weights.reserve(n);

    // Positive half [0, x_max], then mirror by exact negation.
    std::vector<double> half_x, half_w, gx, gw;
    for (std::size_t p = 0; p < orders.size(); ++p) {
        const double a = p * width;
        gauss_legendre(orders[p], gx, gw);
        for (int k = 0; k < orders[p]; ++k) {
            half_x.push_back(a + 0.5 * width * (gx[k] + 1.0));
            half_w.push_back(0.5 * width * gw[k]);
        }
    }
    for (int i = m - 1; i >= 0; --i) {
        grid.nodes.push_back(-half_x[i]);
        grid.weights.push_back(half_w[i]);
    }
    for (int i = 0; i < m; ++i) {
        grid.nodes.push_back(half_x[i]);
        grid.weights.push_back(half_w[i]);
    }
    return grid;
}

double integrate(std::span<const double> values, const Grid& grid) {
    if (static_cast<int>(values.size()) != grid.n())
        throw std::invalid_argument("integrate: length mismatch with grid");
    double sum = 0.0;
    for (int i = 0; i < grid.n(); ++i) sum += grid.weights[i] * values[i];
    return sum;
}

double weighted_average(std::span<const double> values, const Grid& grid) {
    if (static_cast<int>(values.size()) != grid.n())
        throw std::invalid_argument("weighted_average: length mismatch with grid");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        const double qw = grid.weights[i] * weight_w(grid.nodes[i]);
        num += qw * values[i];
        den += qw;
    }
    return num / den;
}

}  // namespace bloch
