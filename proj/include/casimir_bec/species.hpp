#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace casimir_bec {

/// Parameters of the condensed atom. SI throughout.
struct AtomSpecies {
    std::string name;
    double mass = 0.0;                     ///< kg
    double scattering_length = 0.0;        ///< m, s-wave
    double polarizability_over_eps0 = 0.0; ///< m^3, alpha(0) / eps0
    double transition_wavelength = 0.0;    ///< m, only used for the retarded-regime check

    /// Throws DomainError unless every field is finite and strictly positive.
    void validate() const;
};

/// Partial species record, as read from a config file.
struct SpeciesOverrides {
    std::optional<double> mass;
    std::optional<double> scattering_length;
    std::optional<double> polarizability_over_eps0;
    std::optional<double> transition_wavelength;

    bool complete() const
    {
        return mass && scattering_length && polarizability_over_eps0 && transition_wavelength;
    }
};

/// Built-in Rb-87 record.
///
/// mass: 86.909180527 u (AME2016 atomic mass of 87Rb).
/// alpha(0)/eps0 = 47.3e-30 m^3 (static polarizability).
/// transition wavelength: D2 line, 780.241 nm.
/// scattering length: 5.0 nm. The value is not a literature number for a
/// particular hyperfine state; it is the length for which the benchmark trap
/// (N = 1e4, 2.7 kHz / 0.83 Hz) gives mu_tilde ~ 2 pi hbar x 493 Hz. The common
/// 5.3 nm would give ~515 Hz. Override it in the config when needed.
AtomSpecies rubidium87();

/// Species registry. Seeded with "Rb87"; extended from `[species.<name>]`
/// config sections.
class SpeciesRegistry {
public:
    SpeciesRegistry();

    void add(AtomSpecies species);
    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;

    /// Registered record with overrides applied. An unknown name is accepted
    /// only when the overrides form a complete record; otherwise ConfigError.
    AtomSpecies lookup(const std::string& name, const SpeciesOverrides& overrides = {}) const;

private:
    std::map<std::string, AtomSpecies> species_;
};

AtomSpecies species_lookup(const std::string& name, const SpeciesOverrides& overrides = {});

} // namespace casimir_bec
