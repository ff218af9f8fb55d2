#pragma once

#include <string>
#include <vector>

#include "casimir_bec/species.hpp"
#include "casimir_bec/surface.hpp"

namespace casimir_bec {

struct TrapConfig {
    double omega_r = 0.0;     ///< rad/s, radial
    double omega_x = 0.0;     ///< rad/s, axial
    double N = 0.0;           ///< atom number
    double U_N_offset = 0.0;  ///< J, normal Casimir-Polder energy at z_cm

    void validate() const;
    std::vector<std::string> validity_warnings() const;
};

/// Quasi-1D reduction of a cigar-shaped condensate on the fundamental radial mode.
struct Quasi1DParams {
    double sigma = 0.0;        ///< m, sigma^2 = hbar / (m omega_r)
    double g_eff = 0.0;        ///< J m, g / (2 pi sigma^2) = 2 hbar omega_r a
    double mu_tilde = 0.0;     ///< J, mu - hbar omega_r - U_N
    double mu = 0.0;           ///< J, full chemical potential
    double half_length = 0.0;  ///< m, Thomas-Fermi l/2
    double k_mu = 0.0;         ///< rad/m, (2 m mu_tilde / hbar^2)^{1/2}
    double N = 0.0;
    double omega_r = 0.0;
    double omega_x = 0.0;
    double mass = 0.0;

    bool radial_frozen = false; ///< mu_tilde < 0.1 * 8 hbar omega_r
    bool elongated = false;     ///< omega_r / omega_x > 10

    double peak_density() const { return mu_tilde / g_eff; }
};

/// Closed-form TF solution of N = int n_1 dx, mu_tilde = m omega_x^2 (l/2)^2 / 2.
Quasi1DParams derive_quasi1d(const TrapConfig& trap, const AtomSpecies& species);

/// mu_tilde for a prescribed full chemical potential.
double mu_tilde_at_fixed_mu(double mu, double omega_r, double U_N);

struct DensityProfile {
    std::vector<double> x;   ///< m
    std::vector<double> n1;  ///< 1/m
};

struct DensityOptions {
    std::size_t points = 16384;
    bool superpose_potential = true;
};

/// n_1(x) = max(0, (mu_tilde [1 - (2x/l)^2] - U_L(x)) / g_eff) on a uniform grid
/// over [-l/2, l/2]. Throws DomainError when mu_tilde <= max |U_L|.
DensityProfile tf_axial_density(const Quasi1DParams& params, const LateralPotential& potential,
                                const DensityOptions& options = {});

/// Unmodulated parabola n_1(x) = mu_tilde [1 - (2x/l)^2] / g_eff; 0 for |x| > l/2.
double lda_density(const Quasi1DParams& params, double x);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// T_q = hbar^2 q^2 / 2m.
double kinetic_energy(double q, const AtomSpecies& species);
double kinetic_energy(double q, double mass);

/// E_B(q) = sqrt(T_q (T_q + 2 mu_tilde)).
double bogoliubov_dispersion(double q, double mu_tilde, const AtomSpecies& species);
double bogoliubov_dispersion(double q, double mu_tilde, double mass);

/// L_phi = 2 n_1 hbar^2 / (k_B T_bec m).
double coherence_length(double n1_peak, double T_bec, const AtomSpecies& species);

/// hbar c / (k_B T).
double thermal_photon_wavelength(double T_env);

struct RegimeCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string condition; ///< e.g. "value < threshold"
    std::string note;
};

struct RegimeReport {
    std::vector<RegimeCheck> checks;
    bool all_pass() const;
    const RegimeCheck* find(const std::string& name) const;
};

/// Physics-regime diagnostics. Never throws on a failed check.
RegimeReport regime_check(const Quasi1DParams& params, const SurfaceConfig& surface,
                          const LateralPotential& potential, const AtomSpecies& species,
                          double T_env, double T_bec);

} // namespace casimir_bec
