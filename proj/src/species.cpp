#include "casimir_bec/species.hpp"

#include <cmath>

#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"

namespace casimir_bec {

namespace {

void require_positive(double value, const char* field, const std::string& name)
{
    if (!std::isfinite(value) || value <= 0.0)
        throw DomainError("species '" + name + "': " + field + " must be finite and positive");
}

} // namespace

void AtomSpecies::validate() const
{
    if (name.empty())
        throw DomainError("species name is empty");
    require_positive(mass, "mass", name);
    require_positive(scattering_length, "scattering_length", name);
    require_positive(polarizability_over_eps0, "polarizability", name);
    require_positive(transition_wavelength, "transition_wavelength", name);
}

AtomSpecies rubidium87()
{
    return AtomSpecies{
        .name = "Rb87",
        .mass = 86.909180527 * constants::atomic_mass_unit,
        .scattering_length = 5.0e-9,
        .polarizability_over_eps0 = 47.3e-30,
        .transition_wavelength = 780.241e-9,
    };
}

SpeciesRegistry::SpeciesRegistry()
{
    add(rubidium87());
}

void SpeciesRegistry::add(AtomSpecies species)
{
    species.validate();
    auto key = species.name;
    species_.insert_or_assign(std::move(key), std::move(species));
}

bool SpeciesRegistry::contains(const std::string& name) const
{
    return species_.count(name) != 0;
}

std::vector<std::string> SpeciesRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& [name, _] : species_)
        out.push_back(name);
    return out;
}

AtomSpecies SpeciesRegistry::lookup(const std::string& name, const SpeciesOverrides& overrides) const
{
    AtomSpecies result;
    if (auto it = species_.find(name); it != species_.end()) {
        result = it->second;
    }
    else if (overrides.complete()) {
        result.name = name;
    }
    else {
        throw ConfigError("unknown species '" + name +
                          "' and no complete parameter set (mass, scattering_length, "
                          "polarizability, transition_wavelength) supplied");
    }
    if (overrides.mass)
        result.mass = *overrides.mass;
    if (overrides.scattering_length)
        result.scattering_length = *overrides.scattering_length;
    if (overrides.polarizability_over_eps0)
        result.polarizability_over_eps0 = *overrides.polarizability_over_eps0;
    if (overrides.transition_wavelength)
        result.transition_wavelength = *overrides.transition_wavelength;
    try {
        result.validate();
    }
    catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return result;
}

AtomSpecies species_lookup(const std::string& name, const SpeciesOverrides& overrides)
{
    static const SpeciesRegistry registry;
    return registry.lookup(name, overrides);
}

} // namespace casimir_bec
