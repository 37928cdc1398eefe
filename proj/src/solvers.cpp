#include "bloch/solvers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bloch/errors.hpp"

namespace bloch {

const char* to_string(Method method) {
    switch (method) {
        case Method::direct: return "direct";
        case Method::leading_order: return "leading";
        case Method::averaged: return "averaged";
    }
    return "?";
}

std::optional<Method> method_from_string(const std::string& name) {
    if (name == "direct") return Method::direct;
    if (name == "leading" || name == "leading_order") return Method::leading_order;
    if (name == "averaged") return Method::averaged;
    return std::nullopt;
}

namespace {

double measure_norm(const Eigen::VectorXd& v, const MeasureWeights& m) {
    double sum = 0.0;
    for (int i = 0; i < v.size(); ++i) sum += m.values[i] * v(i) * v(i);
    return std::sqrt(sum);
}

// Normalized thermal average over the grid nodes, ascending order.
double w_average(const Eigen::VectorXd& v, const Grid& grid) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        const double qw = grid.weights[i] * weight_w(grid.nodes[i]);
        num += qw * v(i);
        den += qw;
    }
    return num / den;
}

// Same average accumulated independently (descending order); used by the
// second-order eigenvalue so its agreement with the leading-order solution is
// a cross-check rather than a tautology.
double w_average_desc(const Eigen::VectorXd& v, const Grid& grid) {
    double num = 0.0, den = 0.0;
    for (int i = grid.n() - 1; i >= 0; --i) {
        const double qw = grid.weights[i] * weight_w(grid.nodes[i]);
        num += qw * v(i);
        den += qw;
    }
    return num / den;
}

// Hager-style 1-norm estimate of ||A^-1||.
double estimate_inverse_norm1(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, int n) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
    double est = 0.0;
    int last_pivot = -1;
    for (int iter = 0; iter < 5; ++iter) {
        const Eigen::VectorXd y = lu.solve(x);
        est = y.lpNorm<1>();
        Eigen::VectorXd sign(n);
        for (int i = 0; i < n; ++i) sign(i) = y(i) >= 0.0 ? 1.0 : -1.0;
        const Eigen::VectorXd z = lu.transpose().solve(sign);
        int pivot = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&pivot);
        if (zmax <= z.dot(x) || pivot == last_pivot) break;
        x.setZero();
        x(pivot) = 1.0;
        last_pivot = pivot;
    }
    return est;
}

SolutionPhi package_solution(Eigen::VectorXd phi, Method method, double T,
                             const Grid& grid) {
    SolutionPhi sol;
    sol.method = method;
    sol.temperature = T;
    sol.values.assign(phi.data(), phi.data() + phi.size());
    even_odd_project(sol.values, grid, sol.even_part, sol.odd_part);
    return sol;
}

}  // namespace

SolverWorkspace::SolverWorkspace(const Grid& grid, const ExcitationSpectrum& spec,
                                 double T, const SolveOptions& opts) {
    check_regime(spec, T, opts.allow_high_temp);
    gapped_ = spec.gapped();
    if (spec.rate0_divergent()) {
        has_operators_ = false;
        ops_.grid = grid;
        ops_.spec = spec;
        ops_.temperature = T;
        const int n = grid.n();
        adaptive_gamma2_.resize(n);
        for (int i = 0; i < n; ++i)
            adaptive_gamma2_(i) = gamma_nu(2, grid.nodes[i], spec, T, opts.quad_tol);
        return;
    }
    has_operators_ = true;
    ops_ = build_operator_set(grid, spec, T);
    if (gapped_) {
        // Grid row sums of the gated kernel carry panel-level noise at the gap
        // edge; the closed-form solvers read adaptive rates instead.
        const int n = grid.n();
        adaptive_gamma0_.resize(n);
        adaptive_gamma1_.resize(n);
        adaptive_gamma2_.resize(n);
        for (int i = 0; i < n; ++i) {
            adaptive_gamma0_(i) = gamma_nu(0, grid.nodes[i], spec, T, opts.quad_tol);
            adaptive_gamma1_(i) = gamma_nu(1, grid.nodes[i], spec, T, opts.quad_tol);
            adaptive_gamma2_(i) = gamma_nu(2, grid.nodes[i], spec, T, opts.quad_tol);
        }
    }
}

double SolverWorkspace::lambda_star() const {
    if (!has_operators_)
        throw RegimeError("lambda_star: no collision operator for this spectrum");
    if (!lambda_star_) {
        const SpectrumResult result = eigendecompose(symmetrize(ops_), ops_.measure);
        lambda_star_ = result.gap;
    }
    return *lambda_star_;
}

bool SolverWorkspace::reusable_at(double T) const {
    return !gapped_ || T == ops_.temperature;
}

Eigen::VectorXd SolverWorkspace::rate_ratio10(double T) const {
    if (!has_operators_)
        throw RegimeError("rate_ratio10: Gamma0 diverges for this spectrum");
    const double t1 = rate_prefactor(1, ops_.spec, T) / rate_prefactor(0, ops_.spec, T);
    if (gapped_)
        return t1 * (adaptive_gamma1_.array() / adaptive_gamma0_.array()).matrix();
    return t1 * (ops_.gamma1_grid.array() / ops_.gamma0_grid.array()).matrix();
}

Eigen::VectorXd SolverWorkspace::gamma1_vector(double T) const {
    (void)T;
    if (gapped_ || !has_operators_) {
        if (!has_operators_)
            throw RegimeError("gamma1_vector: unavailable for this spectrum");
        return adaptive_gamma1_;
    }
    return ops_.gamma1_grid;
}

Eigen::VectorXd SolverWorkspace::gamma2_vector(double T) const {
    (void)T;
    if (gapped_ || !has_operators_) return adaptive_gamma2_;
    return ops_.gamma2_grid;
}

double SolverWorkspace::gamma2_w_average(double T) const {
    return w_average(gamma2_vector(T), ops_.grid);
}

double SolverWorkspace::gamma0_at(int node, double T) const {
    (void)T;
    if (!has_operators_)
        throw RegimeError("gamma0_at: Gamma0 diverges for this spectrum");
    if (gapped_) return adaptive_gamma0_(node);
    return ops_.gamma0_grid(node);
}

SolutionPhi SolverWorkspace::solve(Method method, double T,
                                   const SolveOptions& opts) const {
    switch (method) {
        case Method::direct: return solve_direct(*this, T, opts);
        case Method::leading_order: return solve_leading_order(*this, T, opts);
        case Method::averaged: return solve_averaged(*this, T, opts);
    }
    throw std::invalid_argument("solve: unknown method");
}

SolutionPhi solve_direct(const SolverWorkspace& ws, double T, const SolveOptions& opts) {
    const OperatorSet& ops = ws.ops();
    const ExcitationSpectrum& spec = ops.spec;
    check_regime(spec, T, opts.allow_high_temp);
    if (spec.rate0_divergent())
        throw RegimeError("solve_direct: requires a finite single-particle rate");
    if (!ws.reusable_at(T))
        throw std::invalid_argument("solve_direct: workspace built for another T");

    const int n = ops.grid.n();
    const double t1 = opts.include_k1
                          ? rate_prefactor(1, spec, T) / rate_prefactor(0, spec, T)
                          : 0.0;
    const double t2 = rate_prefactor(2, spec, T) / rate_prefactor(0, spec, T);

    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - ops.k0 + t2 * ops.n2;
    if (t1 != 0.0) a -= t1 * ops.n1;

    const double pref0 = rate_prefactor(0, spec, T);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = 1.0 / (pref0 * ops.gamma0_grid(i));

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd phi = lu.solve(b);
    const double residual = (a * phi - b).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-6 * b.cwiseAbs().maxCoeff())
        throw NumericalError("solve_direct: system is numerically singular");

    SolutionPhi sol = package_solution(phi, Method::direct, T, ops.grid);
    sol.residual = residual;
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    sol.condition_estimate = norm1 * estimate_inverse_norm1(lu, n);
    sol.condition_warning = sol.condition_estimate > 1e12;
    sol.phi_plus = w_average(
        Eigen::Map<const Eigen::VectorXd>(sol.even_part.data(), n), ops.grid);
    return sol;
}

SolutionPhi solve_leading_order(const SolverWorkspace& ws, double T,
                                const SolveOptions& opts) {
    const OperatorSet& ops = ws.ops();
    const ExcitationSpectrum& spec = ops.spec;
    check_regime(spec, T, opts.allow_high_temp);
    if (spec.rate0_divergent())
        throw RegimeError(
            "solve_leading_order: requires a finite single-particle rate; use the "
            "averaged method");
    if (!ws.reusable_at(T))
        throw std::invalid_argument("solve_leading_order: workspace built for another T");

    const int n = ops.grid.n();
    const double pref1 = rate_prefactor(1, spec, T);
    const double pref2 = rate_prefactor(2, spec, T);

    Eigen::VectorXd series_sum = Eigen::VectorXd::Zero(n);
    int terms = 0;
    double s_term = 0.0;
    if (opts.include_k1) {
        const Eigen::VectorXd r = ws.rate_ratio10(T);
        const double lambda_star = ws.lambda_star();
        const double contraction_budget =
            opts.neumann_tol * (1.0 - lambda_star);

        series_sum = r;
        Eigen::VectorXd increment = r;
        double prev_norm = measure_norm(increment, ops.measure);
        int stalls = 0;
        terms = 1;
        while (prev_norm > 0.0) {
            increment = ops.k0 * increment;
            series_sum += increment;
            ++terms;
            const double inc_norm = measure_norm(increment, ops.measure);
            if (inc_norm <
                contraction_budget * measure_norm(series_sum, ops.measure))
                break;
            if (inc_norm >= prev_norm) {
                if (++stalls > 20)
                    throw NumericalError(
                        "solve_leading_order: series increments stopped "
                        "contracting (spectral-gap failure)");
            } else {
                stalls = 0;
            }
            prev_norm = inc_norm;
            if (terms > 1000000)
                throw NumericalError("solve_leading_order: series did not converge");
        }
        const Eigen::VectorXd gamma1 = ws.gamma1_vector(T);
        s_term = pref1 * w_average(gamma1.cwiseProduct(series_sum), ops.grid);
    }

    const double gamma2_avg = ws.gamma2_w_average(T);
    const double denominator = pref2 * gamma2_avg + s_term;
    const double phi_plus = 1.0 / denominator;

    Eigen::VectorXd phi =
        phi_plus * (Eigen::VectorXd::Ones(n) - series_sum);

    SolutionPhi sol = package_solution(phi, Method::leading_order, T, ops.grid);
    sol.neumann_terms = terms;
    sol.phi_plus = phi_plus;
    return sol;
}

SolutionPhi solve_averaged(const SolverWorkspace& ws, double T,
                           const SolveOptions& opts) {
    const ExcitationSpectrum& spec = ws.spec();
    check_regime(spec, T, opts.allow_high_temp);
    if (!ws.reusable_at(T))
        throw std::invalid_argument("solve_averaged: workspace built for another T");
    const int n = ws.grid().n();
    const double pref2 = rate_prefactor(2, spec, T);
    const double phi_plus = 1.0 / (pref2 * ws.gamma2_w_average(T));
    SolutionPhi sol = package_solution(Eigen::VectorXd::Constant(n, phi_plus),
                                       Method::averaged, T, ws.grid());
    sol.phi_plus = phi_plus;
    return sol;
}

double mu0_second_order(const SolverWorkspace& ws, double T, const SolveOptions& opts) {
    const OperatorSet& ops = ws.ops();
    const ExcitationSpectrum& spec = ops.spec;
    check_regime(spec, T, opts.allow_high_temp);
    if (spec.rate0_divergent())
        throw RegimeError("mu0_second_order: requires a finite single-particle rate");
    if (!ws.reusable_at(T))
        throw std::invalid_argument("mu0_second_order: workspace built for another T");

    const Grid& grid = ops.grid;
    const int n = grid.n();
    const int half = n / 2;

    const double pref1 = rate_prefactor(1, spec, T);
    const double pref2 = rate_prefactor(2, spec, T);

    const double term_gamma2 = pref2 * w_average_desc(ws.gamma2_vector(T), grid);

    double term_series = 0.0;
    if (opts.include_k1) {
        // Factorized odd-subspace solve of (1 - K0) z = Gamma1/Gamma0; the
        // iterated series in the leading-order solver must reproduce it.
        const Eigen::VectorXd r = ws.rate_ratio10(T);
        Eigen::VectorXd r_pos(half);
        for (int a = 0; a < half; ++a) r_pos(a) = r(half + a);
        const Eigen::MatrixXd block =
            Eigen::MatrixXd::Identity(half, half) - odd_block(ops.k0, grid);
        const Eigen::VectorXd z_pos = block.partialPivLu().solve(r_pos);

        Eigen::VectorXd z(n);
        for (int a = 0; a < half; ++a) {
            z(half + a) = z_pos(a);
            z(half - 1 - a) = -z_pos(a);
        }
        const Eigen::VectorXd gamma1 = ws.gamma1_vector(T);
        term_series = pref1 * w_average_desc(gamma1.cwiseProduct(z), grid);
    }
    return -(term_gamma2 + term_series);
}

SolutionPhi solve_direct(double T, const ExcitationSpectrum& spec, const Grid& grid,
                         const SolveOptions& opts) {
    return solve_direct(SolverWorkspace(grid, spec, T, opts), T, opts);
}

SolutionPhi solve_leading_order(double T, const ExcitationSpectrum& spec,
                                const Grid& grid, const SolveOptions& opts) {
    return solve_leading_order(SolverWorkspace(grid, spec, T, opts), T, opts);
}

SolutionPhi solve_averaged(double T, const ExcitationSpectrum& spec, const Grid& grid,
                           const SolveOptions& opts) {
    return solve_averaged(SolverWorkspace(grid, spec, T, opts), T, opts);
}

double mu0_second_order(double T, const ExcitationSpectrum& spec, const Grid& grid,
                        const SolveOptions& opts) {
    return mu0_second_order(SolverWorkspace(grid, spec, T, opts), T, opts);
}

}  // namespace bloch
