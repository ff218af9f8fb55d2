#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "casimir_bec/condensate.hpp"
#include "casimir_bec/species.hpp"
#include "casimir_bec/surface.hpp"

namespace casimir_bec {

struct BraggConfig {
    std::size_t fundamental = 0;         ///< 0-based
    int harmonic = 1;                    ///< q = harmonic * k_c / 2
    double V_B = 1.0;
    std::optional<double> tau;           ///< s
    double tau_in_hbar_over_EB = 100.0;  ///< used when tau is absent
    std::optional<double> omega;         ///< rad/s detuning for the time series
    std::size_t sweep_points = 201;
    std::size_t omega_points = 16384;
    bool closure = false;
    double displacement = 0.0;           ///< m
};

struct NumericsConfig {
    int bdg_cutoff = 16;
    std::size_t bdg_q_points = 65;
    std::size_t band_count = 8;
    std::size_t density_points = 16384;
    std::size_t branch_points = 129;
    std::size_t time_points = 257;
    std::optional<int> max_harmonic;
};

/// Fully validated run configuration in SI units.
///
/// File format: INI-style sections `[species]`, `[species.<name>]`, `[trap]`,
/// `[surface]`, `[bragg]`, `[numerics]`; `key = value unit`. Frequencies are
/// ordinary (Hz, kHz) and converted to rad/s with 2 pi; energies accept J or a
/// frequency f meaning 2 pi hbar f.
struct RunConfig {
    std::filesystem::path source;
    std::string species_name = "Rb87";
    SpeciesOverrides species_overrides;
    AtomSpecies species;
    TrapConfig trap;
    double T_bec = 1e-9;
    SurfaceConfig surface;
    double T_env = 300.0;
    BraggConfig bragg;
    NumericsConfig numerics;
};

/// Every problem (unknown keys, unit mismatches, range errors, missing keys) is
/// collected and reported in one ConfigError, each with section and line.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {},
                            const std::string& source_name = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// A quantity with a unit suffix, e.g. "2.7 kHz", in SI. Exposed for tests.
enum class Dimension { length, frequency, energy, temperature, mass, volume, time, dimensionless };
double parse_quantity(const std::string& text, Dimension dimension);

} // namespace casimir_bec
