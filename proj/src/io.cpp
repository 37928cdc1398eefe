#include "bloch/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bloch {

std::string format_g17(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("atomic_write: write failed for " + path);
    }
    fs::rename(tmp, target);
}

std::string solution_csv(const SolutionPhi& phi, const Grid& grid) {
    std::ostringstream out;
    out << "x,phi,phi_even,phi_odd\n";
    for (int i = 0; i < grid.n(); ++i)
        out << format_g17(grid.nodes[i]) << ',' << format_g17(phi.values[i]) << ','
            << format_g17(phi.even_part[i]) << ',' << format_g17(phi.odd_part[i])
            << '\n';
    return out.str();
}

std::string solution_json(const SolutionPhi& phi, const Grid& grid, double tau) {
    nlohmann::json j;
    j["T"] = phi.temperature;
    j["method"] = to_string(phi.method);
    j["tau"] = tau;
    j["sigma"] = conductivity(tau);
    j["residual"] = phi.residual;
    j["neumann_terms"] = phi.neumann_terms;
    j["phi_plus"] = phi.phi_plus;
    j["x"] = grid.nodes;
    j["phi"] = phi.values;
    j["phi_even"] = phi.even_part;
    j["phi_odd"] = phi.odd_part;
    return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "T,tau,sigma,method,residual\n";
    for (const auto& p : result.points) {
        if (!p.ok) continue;
        out << format_g17(p.temperature) << ',' << format_g17(p.tau) << ','
            << format_g17(p.sigma) << ',' << to_string(p.method) << ','
            << format_g17(p.residual) << '\n';
    }
    return out.str();
}

namespace {

nlohmann::json spec_json(const ExcitationSpectrum& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["alpha"] = spec.alpha;
    j["beta"] = spec.beta;
    j["gap"] = spec.gap;
    j["omega0"] = spec.scales.omega0;
    j["ef_ratio"] = spec.scales.ef_ratio;
    return j;
}

}  // namespace

std::string sweep_json(const SweepResult& result) {
    nlohmann::json j;
    j["spec"] = spec_json(result.spec);
    j["method"] = to_string(result.method);
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : result.points) {
        nlohmann::json pj;
        pj["T"] = p.temperature;
        pj["ok"] = p.ok;
        if (p.ok) {
            pj["tau"] = p.tau;
            pj["sigma"] = p.sigma;
            pj["residual"] = p.residual;
        } else {
            pj["error"] = p.error;
        }
        points.push_back(pj);
    }
    j["points"] = points;
    j["fit_ok"] = result.fit_ok;
    if (result.fit_ok) {
        j["fit"] = {{"exponent", result.fit.exponent},
                    {"stderr", result.fit.stderr_},
                    {"n_points", result.fit.n_points}};
    } else {
        j["fit_error"] = result.fit_error;
    }
    return j.dump(2) + "\n";
}

std::string spectrum_csv(const SpectrumResult& result) {
    std::ostringstream out;
    out << "index,eigenvalue\n";
    for (int k = 0; k < result.eigenvalues.size(); ++k)
        out << k << ',' << format_g17(result.eigenvalues(k)) << '\n';
    return out.str();
}

std::string spectrum_json(const SpectrumResult& result) {
    nlohmann::json j;
    j["lambda0"] = result.eigenvalues(0);
    j["lambda_star"] = result.gap;
    j["hs_norm"] = result.hs_norm;
    j["unit_multiplicity"] = result.unit_multiplicity;
    std::vector<double> values(result.eigenvalues.data(),
                               result.eigenvalues.data() + result.eigenvalues.size());
    j["eigenvalues"] = values;
    return j.dump(2) + "\n";
}

void dump_kernel_csv(const DiscretizedKernel& kernel, const std::string& path) {
    std::ostringstream out;
    out << "n,x_max,nu,T\n"
        << kernel.grid.n() << ',' << format_g17(kernel.grid.x_max) << ',' << kernel.nu
        << ',' << format_g17(kernel.temperature) << '\n';
    for (int i = 0; i < kernel.matrix.rows(); ++i) {
        for (int j = 0; j < kernel.matrix.cols(); ++j) {
            if (j) out << ',';
            out << format_g17(kernel.matrix(i, j));
        }
        out << '\n';
    }
    atomic_write(path, out.str());
}

}  // namespace bloch
