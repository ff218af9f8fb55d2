#pragma once

#include "casimir_bec/constants.hpp"

// Human-facing conversions. Internally everything is SI; energies are reported
// as ordinary frequencies E / (2 pi hbar) and lengths in micrometres.
namespace casimir_bec::units {

inline constexpr double energy_to_frequency(double energy_J)
{
    return energy_J / (constants::two_pi * constants::hbar);
}

inline constexpr double frequency_to_energy(double frequency_Hz)
{
    return frequency_Hz * constants::two_pi * constants::hbar;
}

inline constexpr double to_micrometers(double meters) { return meters * 1e6; }
inline constexpr double from_micrometers(double um) { return um * 1e-6; }

// Ordinary frequency (Hz) to angular frequency (rad/s).
inline constexpr double angular(double frequency_Hz) { return constants::two_pi * frequency_Hz; }

inline constexpr double wavenumber_from_period(double period_m) { return constants::two_pi / period_m; }

} // namespace casimir_bec::units
