#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bloch/cli.hpp"
#include "bloch/errors.hpp"
#include "bloch/io.hpp"
#include "bloch/kernels.hpp"
#include "bloch/operators.hpp"
#include "bloch/solvers.hpp"
#include "bloch/spectral.hpp"
#include "bloch/transport.hpp"

namespace py = pybind11;
using namespace bloch;

namespace {

SpectrumResult spectrum_of(const Grid& grid, const ExcitationSpectrum& spec, double t) {
    const OperatorSet ops = build_operator_set(grid, spec, t);
    return eigendecompose(symmetrize(ops), ops.measure);
}

Method parse_method(const std::string& name) {
    const auto m = method_from_string(name);
    if (!m) throw std::invalid_argument("unknown method: " + name);
    return *m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Collision kernels, spectral analysis and conductivity sweeps for "
              "electrons scattered by bosonic excitations";

    py::register_exception<RegimeError>(m, "RegimeError");
    py::register_exception<NumericalError>(m, "NumericalError");

    py::class_<PhysicalScales>(m, "PhysicalScales")
        .def(py::init<double, double>(), py::arg("omega0") = 1.0,
             py::arg("ef_ratio") = 100.0)
        .def_readwrite("omega0", &PhysicalScales::omega0)
        .def_readwrite("ef_ratio", &PhysicalScales::ef_ratio)
        .def("eps_fermi", &PhysicalScales::eps_fermi);

    py::enum_<ExcitationKind>(m, "ExcitationKind")
        .value("phonon", ExcitationKind::phonon)
        .value("magnon", ExcitationKind::magnon)
        .value("coulomb", ExcitationKind::coulomb)
        .value("custom", ExcitationKind::custom);

    py::class_<ExcitationSpectrum>(m, "ExcitationSpectrum")
        .def_readonly("kind", &ExcitationSpectrum::kind)
        .def_readonly("alpha", &ExcitationSpectrum::alpha)
        .def_readonly("beta", &ExcitationSpectrum::beta)
        .def_readonly("gap", &ExcitationSpectrum::gap)
        .def_readonly("scales", &ExcitationSpectrum::scales)
        .def("exponent0", &ExcitationSpectrum::exponent0)
        .def("gapped", &ExcitationSpectrum::gapped)
        .def("__repr__", [](const ExcitationSpectrum& s) {
            return std::string("ExcitationSpectrum(") + to_string(s.kind) + ")";
        });

    m.def("phonon_spectrum", &phonon_spectrum, py::arg("scales") = PhysicalScales{});
    m.def("magnon_spectrum", &magnon_spectrum, py::arg("gap"),
          py::arg("scales") = PhysicalScales{});
    m.def("coulomb_spectrum", &coulomb_spectrum, py::arg("scales") = PhysicalScales{});
    m.def("custom_spectrum", &custom_spectrum, py::arg("alpha"), py::arg("beta"),
          py::arg("gap") = 0.0, py::arg("scales") = PhysicalScales{});

    m.def("vbar0", &vbar0, py::arg("spec"), py::arg("u"));
    m.def("vbar1", &vbar1, py::arg("spec"), py::arg("u"));
    m.def("vbar2", &vbar2, py::arg("spec"), py::arg("u"));

    py::class_<Grid>(m, "Grid")
        .def_readonly("nodes", &Grid::nodes)
        .def_readonly("weights", &Grid::weights)
        .def_readonly("x_max", &Grid::x_max)
        .def_property_readonly("n", &Grid::n);

    m.def("build_grid", &build_grid, py::arg("n"), py::arg("x_max"));
    m.def("weight_w", &weight_w, py::arg("x"));
    m.def("fermi", &fermi, py::arg("x"));
    m.def("bose", &bose, py::arg("x"));
    m.def("stable_combo", &stable_combo, py::arg("x"), py::arg("y"));
    m.def("kbar0_reduced", &kbar0_reduced, py::arg("x"), py::arg("y"));
    m.def("kbar_nu", &kbar_nu, py::arg("nu"), py::arg("eps"), py::arg("u"),
          py::arg("T"), py::arg("spec"));
    m.def("gamma_nu", &gamma_nu, py::arg("nu"), py::arg("x"), py::arg("spec"),
          py::arg("T"), py::arg("rel_tol") = 1e-10);
    m.def("rate_prefactor", &rate_prefactor, py::arg("nu"), py::arg("spec"),
          py::arg("T"));

    py::class_<RateTable>(m, "RateTable")
        .def_readonly("gamma0", &RateTable::gamma0)
        .def_readonly("gamma1", &RateTable::gamma1)
        .def_readonly("gamma2", &RateTable::gamma2)
        .def_readonly("temperature", &RateTable::temperature);
    m.def("build_rate_table", &build_rate_table, py::arg("grid"), py::arg("spec"),
          py::arg("T"), py::arg("rel_tol") = 1e-10);

    py::class_<DiscretizedKernel>(m, "DiscretizedKernel")
        .def_readonly("matrix", &DiscretizedKernel::matrix)
        .def_readonly("nu", &DiscretizedKernel::nu)
        .def_readonly("temperature", &DiscretizedKernel::temperature)
        .def_readonly("gamma0_grid", &DiscretizedKernel::gamma0_grid)
        .def_readonly("max_raw_rowsum_dev", &DiscretizedKernel::max_raw_rowsum_dev);
    m.def("assemble", &assemble, py::arg("nu"), py::arg("grid"), py::arg("spec"),
          py::arg("T"));
    m.def(
        "symmetrize",
        [](const DiscretizedKernel& k0) { return symmetrize(k0); },
        py::arg("k0"));

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("eigenvalues", &SpectrumResult::eigenvalues)
        .def_readonly("eigenvectors", &SpectrumResult::eigenvectors)
        .def_readonly("gap", &SpectrumResult::gap)
        .def_readonly("hs_norm", &SpectrumResult::hs_norm)
        .def_readonly("unit_multiplicity", &SpectrumResult::unit_multiplicity);
    m.def("spectrum_of", &spectrum_of, py::arg("grid"), py::arg("spec"), py::arg("T"),
          py::call_guard<py::gil_scoped_release>(),
          "Eigenstructure of the symmetrized kernel at temperature T");

    py::class_<CollisionSpectrum>(m, "CollisionSpectrum")
        .def_readonly("shifted", &CollisionSpectrum::shifted)
        .def_readonly("zero_count", &CollisionSpectrum::zero_count)
        .def_readonly("ok", &CollisionSpectrum::ok)
        .def_readonly("note", &CollisionSpectrum::note);
    m.def("collision_spectrum", &collision_spectrum, py::arg("result"));
    m.def("hilbert_schmidt_norm", &hilbert_schmidt_norm, py::arg("grid"),
          py::arg("spec"), py::arg("T"), py::arg("rel_tol") = 1e-10,
          py::call_guard<py::gil_scoped_release>());

    py::class_<SolutionPhi>(m, "SolutionPhi")
        .def_readonly("values", &SolutionPhi::values)
        .def_readonly("even_part", &SolutionPhi::even_part)
        .def_readonly("odd_part", &SolutionPhi::odd_part)
        .def_readonly("temperature", &SolutionPhi::temperature)
        .def_readonly("residual", &SolutionPhi::residual)
        .def_readonly("neumann_terms", &SolutionPhi::neumann_terms)
        .def_readonly("phi_plus", &SolutionPhi::phi_plus)
        .def_property_readonly("method", [](const SolutionPhi& s) {
            return std::string(to_string(s.method));
        });

    m.def(
        "solve",
        [](const std::string& method, double t, const ExcitationSpectrum& spec,
           const Grid& grid, bool include_k1, bool allow_high_temp) {
            SolveOptions opts;
            opts.include_k1 = include_k1;
            opts.allow_high_temp = allow_high_temp;
            return SolverWorkspace(grid, spec, t, opts)
                .solve(parse_method(method), t, opts);
        },
        py::arg("method"), py::arg("T"), py::arg("spec"), py::arg("grid"),
        py::arg("include_k1") = true, py::arg("allow_high_temp") = false,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "mu0_second_order",
        [](double t, const ExcitationSpectrum& spec, const Grid& grid) {
            return mu0_second_order(t, spec, grid);
        },
        py::arg("T"), py::arg("spec"), py::arg("grid"),
        py::call_guard<py::gil_scoped_release>());

    m.def("relaxation_time", &relaxation_time, py::arg("phi"), py::arg("grid"));
    m.def("conductivity", &conductivity, py::arg("tau"));
    m.def("temperature_ladder", &temperature_ladder, py::arg("t_min"), py::arg("t_max"),
          py::arg("n_points"), py::arg("log_spacing") = true);

    py::class_<TransportPoint>(m, "TransportPoint")
        .def_readonly("temperature", &TransportPoint::temperature)
        .def_readonly("tau", &TransportPoint::tau)
        .def_readonly("sigma", &TransportPoint::sigma)
        .def_readonly("residual", &TransportPoint::residual)
        .def_readonly("ok", &TransportPoint::ok)
        .def_readonly("error", &TransportPoint::error);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("exponent", &FitResult::exponent)
        .def_readonly("stderr", &FitResult::stderr_)
        .def_readonly("n_points", &FitResult::n_points);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("points", &SweepResult::points)
        .def_readonly("fit", &SweepResult::fit)
        .def_readonly("fit_ok", &SweepResult::fit_ok)
        .def_readonly("fit_error", &SweepResult::fit_error);

    m.def(
        "sweep",
        [](const ExcitationSpectrum& spec, const std::string& method,
           const std::vector<double>& t_values, const Grid& grid, bool include_k1,
           bool allow_high_temp, int threads) {
            SolveOptions opts;
            opts.include_k1 = include_k1;
            opts.allow_high_temp = allow_high_temp;
            return sweep(spec, parse_method(method), t_values, grid, opts, threads);
        },
        py::arg("spec"), py::arg("method"), py::arg("t_values"), py::arg("grid"),
        py::arg("include_k1") = true, py::arg("allow_high_temp") = false,
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

    m.def("fit_power_law", [](const std::vector<TransportPoint>& points) {
        return fit_power_law(points);
    });

    m.def("run_cli", &run_cli, py::arg("args"),
          "Run the command-line interface in-process; returns the exit code");

    m.attr("__version__") = "0.1.0";
}
