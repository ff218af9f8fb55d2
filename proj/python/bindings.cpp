#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "casimir_bec/bdg.hpp"
#include "casimir_bec/bragg.hpp"
#include "casimir_bec/config.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/scenario.hpp"
#include "casimir_bec/spectrum.hpp"
#include "casimir_bec/validation.hpp"

namespace py = pybind11;
namespace cb = casimir_bec;

namespace {

py::object to_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

} // namespace

PYBIND11_MODULE(_casimir_bec, m)
{
    m.doc() = "Casimir-Polder lateral potential, Bogoliubov band gaps and Bragg response of a quasi-1D condensate";

    auto base = py::register_exception<cb::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<cb::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<cb::DomainError>(m, "DomainError", base.ptr());
    py::register_exception<cb::ExtrapolationError>(m, "ExtrapolationError", base.ptr());
    py::register_exception<cb::InstabilityError>(m, "InstabilityError", base.ptr());
    py::register_exception<cb::ContractError>(m, "ContractError", base.ptr());
    py::register_exception<cb::UnsupportedConfiguration>(m, "UnsupportedConfiguration", base.ptr());

    py::class_<cb::AtomSpecies>(m, "AtomSpecies")
        .def_readonly("name", &cb::AtomSpecies::name)
        .def_readonly("mass", &cb::AtomSpecies::mass)
        .def_readonly("scattering_length", &cb::AtomSpecies::scattering_length)
        .def_readonly("polarizability_over_eps0", &cb::AtomSpecies::polarizability_over_eps0)
        .def_readonly("transition_wavelength", &cb::AtomSpecies::transition_wavelength);
    m.def("rubidium87", &cb::rubidium87);

    py::class_<cb::Quasi1DParams>(m, "Quasi1DParams")
        .def_readonly("sigma", &cb::Quasi1DParams::sigma)
        .def_readonly("g_eff", &cb::Quasi1DParams::g_eff)
        .def_readonly("mu_tilde", &cb::Quasi1DParams::mu_tilde)
        .def_readonly("mu", &cb::Quasi1DParams::mu)
        .def_readonly("half_length", &cb::Quasi1DParams::half_length)
        .def_readonly("k_mu", &cb::Quasi1DParams::k_mu)
        .def_readonly("N", &cb::Quasi1DParams::N)
        .def_readonly("mass", &cb::Quasi1DParams::mass)
        .def_readonly("radial_frozen", &cb::Quasi1DParams::radial_frozen)
        .def_readonly("elongated", &cb::Quasi1DParams::elongated);

    py::class_<cb::HarmonicSeries>(m, "HarmonicSeries")
        .def_readonly("k_c", &cb::HarmonicSeries::k_c)
        .def_readonly("U", &cb::HarmonicSeries::U);
    py::class_<cb::LateralPotential>(m, "LateralPotential")
        .def_readonly("fundamentals", &cb::LateralPotential::fundamentals)
        .def_readonly("U_N", &cb::LateralPotential::U_N)
        .def("__call__", [](const cb::LateralPotential& p, double x) { return cb::lateral_eval(p, x); });

    py::class_<cb::GapEntry>(m, "GapEntry")
        .def_readonly("fundamental", &cb::GapEntry::fundamental)
        .def_readonly("n", &cb::GapEntry::n)
        .def_readonly("k_c", &cb::GapEntry::k_c)
        .def_readonly("q_n", &cb::GapEntry::q_n)
        .def_readonly("U_n", &cb::GapEntry::U_n)
        .def_readonly("F", &cb::GapEntry::F)
        .def_readonly("gap", &cb::GapEntry::gap)
        .def_readonly("E_B", &cb::GapEntry::E_B)
        .def_property_readonly("coupling_ratio", &cb::GapEntry::coupling_ratio);
    py::class_<cb::GapReport>(m, "GapReport")
        .def_readonly("mu_tilde", &cb::GapReport::mu_tilde)
        .def_readonly("entries", &cb::GapReport::entries)
        .def_readonly("warnings", &cb::GapReport::warnings);

    py::class_<cb::RunConfig>(m, "RunConfig")
        .def_readonly("species", &cb::RunConfig::species)
        .def_property_readonly("omega_r", [](const cb::RunConfig& c) { return c.trap.omega_r; })
        .def_property_readonly("omega_x", [](const cb::RunConfig& c) { return c.trap.omega_x; })
        .def_property_readonly("N", [](const cb::RunConfig& c) { return c.trap.N; })
        .def_property_readonly("z_cm", [](const cb::RunConfig& c) { return c.surface.z_cm; });
    m.def("parse_config", &cb::parse_config, py::arg("path"));
    m.def("parse_config_text", &cb::parse_config_text, py::arg("text"), py::arg("base_dir") = std::filesystem::path{},
          py::arg("source_name") = "<config>");
    m.def("benchmark_config", &cb::benchmark_config);
    m.def("near_surface_config", &cb::near_surface_config);

    m.def("derive_quasi1d", [](const cb::RunConfig& c) { return cb::derive_quasi1d(c.trap, c.species); },
          py::arg("config"));
    m.def("lateral_coefficients",
          [](const cb::RunConfig& c) {
              auto p = cb::lateral_coefficients(c.surface, c.species);
              p.U_N = c.trap.U_N_offset;
              return p;
          },
          py::arg("config"));
    m.def("perturbative_gaps", &cb::perturbative_gaps, py::arg("params"), py::arg("potential"));
    m.def("suppression_factor", py::overload_cast<double, double, double>(&cb::suppression_factor), py::arg("q"),
          py::arg("mu_tilde"), py::arg("mass"));
    m.def("bogoliubov_dispersion", py::overload_cast<double, double, double>(&cb::bogoliubov_dispersion),
          py::arg("q"), py::arg("mu_tilde"), py::arg("mass"));

    py::class_<cb::BdgGap>(m, "BdgGap")
        .def_readonly("fundamental", &cb::BdgGap::fundamental)
        .def_readonly("n", &cb::BdgGap::n)
        .def_readonly("gap", &cb::BdgGap::gap)
        .def_readonly("E_B", &cb::BdgGap::E_B);
    py::class_<cb::BdgBands>(m, "BdgBands")
        .def_readonly("q_b", &cb::BdgBands::q_b)
        .def_readonly("bands", &cb::BdgBands::bands)
        .def_readonly("gaps", &cb::BdgBands::gaps)
        .def_readonly("converged", &cb::BdgBands::converged);
    m.def("solve_bdg_bands",
          [](const cb::Quasi1DParams& p, const cb::LateralPotential& pot, int M, std::size_t q_points,
             std::size_t band_count) {
              cb::BdgBandOptions o;
              o.M = M;
              o.q_points = q_points;
              o.band_count = band_count;
              return cb::solve_bdg_bands(p, pot, o);
          },
          py::arg("params"), py::arg("potential"), py::arg("M") = 16, py::arg("q_points") = 65,
          py::arg("band_count") = 8);
    py::class_<cb::OracleRow>(m, "OracleRow")
        .def_readonly("gap_perturbative", &cb::OracleRow::gap_perturbative)
        .def_readonly("gap_numeric", &cb::OracleRow::gap_numeric)
        .def_readonly("relative_deviation", &cb::OracleRow::relative_deviation)
        .def_readonly("tolerance", &cb::OracleRow::tolerance)
        .def_readonly("pass_", &cb::OracleRow::pass);
    m.def("oracle_compare", [](const cb::GapReport& g, const cb::BdgBands& b) { return cb::oracle_compare(g, b).rows; },
          py::arg("perturbative"), py::arg("numeric"));

    py::class_<cb::DsfBranch>(m, "DsfBranch")
        .def_readonly("sign", &cb::DsfBranch::sign)
        .def_readonly("S", &cb::DsfBranch::S)
        .def_readonly("support_low", &cb::DsfBranch::support_low)
        .def_readonly("support_high", &cb::DsfBranch::support_high);
    py::class_<cb::DsfSpectrum>(m, "DsfSpectrum")
        .def_readonly("q", &cb::DsfSpectrum::q)
        .def_readonly("omega", &cb::DsfSpectrum::omega)
        .def_readonly("branches", &cb::DsfSpectrum::branches)
        .def("weight", [](const cb::DsfSpectrum& s, std::size_t i) { return cb::branch_weight(s, s.branches.at(i)); });
    m.def("linspace", &cb::linspace);
    m.def("dsf_lda", &cb::dsf_lda, py::arg("q"), py::arg("omega"), py::arg("params"), py::arg("U"));
    m.def("dsf_homogeneous", &cb::dsf_homogeneous, py::arg("q"), py::arg("omega"), py::arg("params"));
    m.def("bragg_momentum",
          [](const cb::DsfSpectrum& fwd, double omega, double V_B, double tau) {
              return cb::bragg_momentum(cb::BraggPulse{fwd.q, omega, V_B, tau}, fwd,
                                        cb::zero_temperature_counterpart(fwd), tau);
          },
          py::arg("spectrum"), py::arg("omega"), py::arg("V_B"), py::arg("tau"));

    m.def("run_scenario",
          [](const cb::RunConfig& c, const std::string& command, const std::filesystem::path& out) {
              return to_python(cb::run_scenario(c, cb::parse_command(command), out).document);
          },
          py::arg("config"), py::arg("command"), py::arg("out_dir"));

    py::class_<cb::ValidationRow>(m, "ValidationRow")
        .def_readonly("quantity", &cb::ValidationRow::quantity)
        .def_readonly("unit", &cb::ValidationRow::unit)
        .def_readonly("reference", &cb::ValidationRow::reference)
        .def_readonly("computed", &cb::ValidationRow::computed)
        .def_readonly("tolerance", &cb::ValidationRow::tolerance)
        .def_readonly("pass_", &cb::ValidationRow::pass);
    m.def("validate_paper", [] { return cb::validate_paper().rows; });
}
