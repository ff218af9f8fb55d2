#pragma once

#include <string>
#include <vector>

#include "casimir_bec/condensate.hpp"
#include "casimir_bec/species.hpp"
#include "casimir_bec/surface.hpp"

namespace casimir_bec {

/// F(q) = T_q / E_B(q); 0 at q = 0.
double suppression_factor(double q, double mu_tilde, const AtomSpecies& species);
double suppression_factor(double q, double mu_tilde, double mass);

struct GapEntry {
    std::size_t fundamental = 0;
    int n = 0;                 ///< harmonic index, zone edge q_n = n k_c / 2
    double k_c = 0.0;
    double q_n = 0.0;          ///< rad/m
    double U_n = 0.0;          ///< J, signed coefficient
    double F = 0.0;
    double gap = 0.0;          ///< J, |U_n| F(q_n)
    double E_B = 0.0;          ///< J, E_B(q_n)
    double ratio() const { return gap / E_B; }
    double coupling_ratio() const; ///< |U_n| / E_B(q_n), the expansion parameter
};

struct GapReport {
    double mu_tilde = 0.0;
    std::vector<GapEntry> entries;
    std::vector<std::string> warnings;

    const GapEntry* find(std::size_t fundamental, int n) const;
};

/// One entry per nonzero U_n; warns if |U_n| / E_B(q_n) > 0.1.
GapReport perturbative_gaps(const Quasi1DParams& params, const LateralPotential& potential);

struct BranchSlice {
    int n = 0;
    double k_c = 0.0;
    double U_n = 0.0;
    std::vector<double> eps;      ///< rad/m, detuning from q_n
    std::vector<double> E_minus;  ///< J
    std::vector<double> E_plus;   ///< J
    std::vector<double> E_B;      ///< J, E_B(q_n + eps), unperturbed
};

/// 2x2 near-degenerate problem for Bogoliubov states q_n + eps and -q_n + eps.
/// |eps| must not exceed k_c / 4.
BranchSlice band_branches(const Quasi1DParams& params, double k_c, double U_n, int n,
                          const std::vector<double>& eps);

/// Gap for mu >> hbar omega_r (radial TF):
/// (3 hbar omega_r / 4 mu) (k_c R / 2) |U_n|, R = (2 mu / m omega_r^2)^{1/2}.
/// Such gaps are too small for Bragg detection; the low-density branch is the
/// practical one.
double gap_high_density(double mu, double omega_r, double k_c, double U_n, const AtomSpecies& species);
double radial_tf_radius(double mu, double omega_r, const AtomSpecies& species);
bool high_density_regime(double mu, double omega_r);

/// E_{n,0}(q)^2 = 2 (hbar omega_r)^2 n(n+1) + (q R)^2 (hbar omega_r / 2)^2, to O((qR)^4).
double multibranch_dispersion(int n, double q, double mu, double omega_r, const AtomSpecies& species);

/// delta k_min ~ k_c |U| / E0.
double min_resolvable_separation(double k_c, double U, double E0);

struct CoupledSplitting {
    std::size_t fundamental = 0;
    double k_c = 0.0;
    double U = 0.0;
    std::vector<double> momenta;      ///< cluster plane-wave momenta, rad/m
    std::vector<double> eigenvalues;  ///< J, ascending
    double splitting = 0.0;           ///< J
    double independent_gap = 0.0;     ///< J, |U| F(k_c/2)
    double relative_deviation() const;
};

struct CoupledModeReport {
    std::vector<CoupledSplitting> splittings; ///< one per fundamental
    double delta_k = 0.0;       ///< |k_c1 - k_c2|
    double delta_k_min = 0.0;   ///< max over fundamentals of k_c |U| / E_B(k_c/2)
    bool independent = false;   ///< delta_k > 10 delta_k_min
};

/// First-order degenerate perturbation theory for two corrugation fundamentals.
/// Requires exactly two fundamentals with one harmonic each.
CoupledModeReport coupled_mode_gaps(const Quasi1DParams& params, const LateralPotential& potential);

} // namespace casimir_bec

namespace casimir_bec {

/// band_branches for harmonic n of fundamental `fundamental` of `potential`
/// (U_n = 0 when the harmonic is absent).
BranchSlice band_branches(const Quasi1DParams& params, const LateralPotential& potential,
                          std::size_t fundamental, int n, const std::vector<double>& eps);

} // namespace casimir_bec
