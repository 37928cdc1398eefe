#include "bloch/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <thread>

#include "bloch/errors.hpp"

namespace bloch {

double relaxation_time(const SolutionPhi& phi, const Grid& grid) {
    if (static_cast<int>(phi.values.size()) != grid.n())
        throw std::invalid_argument("relaxation_time: solution does not match grid");
    double sum = 0.0;
    for (int i = 0; i < grid.n(); ++i)
        sum += grid.weights[i] * weight_w(grid.nodes[i]) * phi.values[i];
    return 0.5 * sum;
}

double conductivity(double tau) { return tau; }

std::vector<double> temperature_ladder(double t_min, double t_max, int n_points,
                                       bool log_spacing) {
    if (n_points < 1) throw std::invalid_argument("temperature_ladder: need >= 1 point");
    if (!(t_min > 0.0) || !(t_max >= t_min))
        throw std::invalid_argument("temperature_ladder: need 0 < t_min <= t_max");
    std::vector<double> ladder(n_points);
    if (n_points == 1) {
        ladder[0] = t_min;
        return ladder;
    }
    for (int k = 0; k < n_points; ++k) {
        const double f = static_cast<double>(k) / (n_points - 1);
        ladder[k] = log_spacing ? t_min * std::pow(t_max / t_min, f)
                                : t_min + f * (t_max - t_min);
    }
    return ladder;
}

namespace {

int resolve_threads(int requested, int n_points) {
    int cap = 1 << 20;
    if (const char* env = std::getenv("BLOCH_KINETICS_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) cap = parsed;
    }
    int threads = requested > 0
                      ? requested
                      : std::max(1u, std::thread::hardware_concurrency());
    return std::max(1, std::min({threads, cap, n_points}));
}

}  // namespace

SweepResult sweep(const ExcitationSpectrum& spec, Method method,
                  std::span<const double> t_values, const Grid& grid,
                  const SolveOptions& opts, int threads) {
    const int n_points = static_cast<int>(t_values.size());
    if (n_points < 1) throw std::invalid_argument("sweep: need at least one temperature");

    SweepResult result;
    result.spec = spec;
    result.method = method;
    result.points.resize(n_points);

    // Kernels are temperature independent without a gap: share one workspace.
    std::optional<SolverWorkspace> shared;
    if (!spec.gapped()) {
        for (const double t : t_values) {
            try {
                shared.emplace(grid, spec, t, opts);
                break;
            } catch (const RegimeError&) {
            }
        }
        if (shared && method == Method::leading_order && !spec.rate0_divergent())
            shared->lambda_star();  // prime the cache before going parallel
    }

    auto run_point = [&](int k) {
        TransportPoint& point = result.points[k];
        const double t = t_values[k];
        point.temperature = t;
        point.method = method;
        try {
            check_regime(spec, t, opts.allow_high_temp);
            const SolutionPhi sol =
                (shared && shared->reusable_at(t))
                    ? shared->solve(method, t, opts)
                    : SolverWorkspace(grid, spec, t, opts).solve(method, t, opts);
            point.tau = relaxation_time(sol, grid);
            point.sigma = conductivity(point.tau);
            point.residual = sol.residual;
            point.ok = true;
        } catch (const std::exception& e) {
            point.ok = false;
            point.error = e.what();
        }
    };

    const int n_threads = resolve_threads(threads, n_points);
    if (n_threads <= 1) {
        for (int k = 0; k < n_points; ++k) run_point(k);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (int k = next.fetch_add(1); k < n_points; k = next.fetch_add(1))
                    run_point(k);
            });
        for (auto& th : pool) th.join();
    }

    std::stable_sort(result.points.begin(), result.points.end(),
                     [](const TransportPoint& a, const TransportPoint& b) {
                         return a.temperature < b.temperature;
                     });

    std::vector<TransportPoint> ok_points;
    for (const auto& p : result.points)
        if (p.ok) ok_points.push_back(p);
    if (static_cast<int>(ok_points.size()) < 5) {
        result.fit_ok = false;
        result.fit_error = "fit requires at least 5 successful points, got " +
                           std::to_string(ok_points.size());
    } else {
        try {
            result.fit = fit_power_law(ok_points);
            result.fit_ok = true;
        } catch (const std::exception& e) {
            result.fit_ok = false;
            result.fit_error = e.what();
        }
    }
    return result;
}

FitResult fit_power_law(std::span<const TransportPoint> points) {
    const int n = static_cast<int>(points.size());
    if (n < 5) throw std::invalid_argument("fit_power_law: need at least 5 points");
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        if (!(points[i].sigma > 0.0))
            throw std::invalid_argument("fit_power_law: non-positive sigma");
        x[i] = std::log(points[i].temperature);
        y[i] = std::log(points[i].sigma);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("fit_power_law: temperatures do not span a range");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
    }
    FitResult fit;
    fit.exponent = slope;
    fit.stderr_ = std::sqrt(ss_res / (n - 2) / sxx);
    fit.n_points = n;
    return fit;
}

}  // namespace bloch
