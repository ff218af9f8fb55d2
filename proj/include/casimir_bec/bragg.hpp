#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "casimir_bec/condensate.hpp"
#include "casimir_bec/surface.hpp"

namespace casimir_bec {

/// Two-photon Bragg pulse with a Heaviside envelope of duration tau.
/// LDA along x requires tau * omega_x < 1 and hbar omega_x << E_B(k_c/2).
struct BraggPulse {
    double q = 0.0;      ///< rad/m, k1 - k2 along x
    double omega = 0.0;  ///< rad/s, omega1 - omega2
    double V_B = 1.0;    ///< drive amplitude, enters squared
    double tau = 0.0;    ///< s

    void validate() const;
};

/// One branch of a sampled dynamic structure factor S(q, omega), per unit
/// energy (1/J), so that int S d(hbar omega) is a dimensionless weight.
struct DsfBranch {
    int sign = 0;                ///< -1 lower, +1 upper, 0 single (homogeneous / U = 0)
    std::vector<double> S;       ///< aligned with DsfSpectrum::omega
    double support_low = 0.0;    ///< J, E(x = L/2)
    double support_high = 0.0;   ///< J, E(x = 0): resonance energy
    double edge_coefficient = 0.0; ///< C in S ~ C / sqrt(support_high - E) near the edge
    std::optional<std::size_t> resonance_bin; ///< index i with omega_i <= edge/hbar < omega_{i+1}
    bool delta = false;          ///< homogeneous: all weight in resonance_bin

    double resonance_omega() const; ///< support_high / hbar
};

struct DsfSpectrum {
    double q = 0.0;
    std::vector<double> omega;   ///< rad/s, uniform, ascending
    std::vector<DsfBranch> branches;

    double step() const;
    std::vector<double> total() const; ///< sum of branch samples
};

/// Uniform grid helper.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// S = (N hbar^2 q^2 / 2 m E_B) delta(hbar omega - E_B), stored as one bin of
/// height weight / (hbar d omega). Throws DomainError when the grid does not
/// bracket E_B / hbar.
DsfSpectrum dsf_homogeneous(double q, const std::vector<double>& omega, const Quasi1DParams& params);

/// E^{(0)}(x, q) = sqrt(T_q^2 + 2 T_q mu_tilde [1 - (2x/L)^2]).
double local_energy(double x, double q, const Quasi1DParams& params);

/// E^{+-}(x, q) = E^{(0)} +- (T_q / 2 E^{(0)}) |U|. Throws DomainError for |x| > L/2.
double local_spectrum(double x, double q, const Quasi1DParams& params, double U, int sign);

/// d E^{+-} / dx.
double local_spectrum_slope(double x, double q, const Quasi1DParams& params, double U, int sign);

/// Root x* in [0, L/2] of local_spectrum(x*) = E by bisection.
double lda_turning_point(double E, double q, const Quasi1DParams& params, double U, int sign);

/// LDA branches S^{+-}(omega) = 2 n_1(x*) (T_q / E^{(0)}(x*)) / |dE^{+-}/dx|(x*).
/// U = 0 gives a single branch. Throws DomainError when |U| >= 2 T_q.
DsfSpectrum dsf_lda(double q, const std::vector<double>& omega, const Quasi1DParams& params, double U);

/// int S(omega) f(omega) d(hbar omega) with the inverse-square-root resonance
/// integrated analytically.
double branch_integral(const DsfSpectrum& spectrum, const DsfBranch& branch,
                       const std::function<double(double omega)>& f);
double branch_weight(const DsfSpectrum& spectrum, const DsfBranch& branch);

/// Anti-Stokes partner S(-q, -omega') at zero temperature: identically zero for
/// omega' > 0 (no thermally populated quasiparticles).
DsfSpectrum zero_temperature_counterpart(const DsfSpectrum& forward);

struct BraggOptions {
    std::size_t time_points = 257;
    bool position_closure = false; ///< integrate dX/dt = P_X / m (X = sum_i x_i)
    double displacement = 0.0;     ///< m, rigid shift of the TF density for the sine term
    std::size_t density_points = 4096;
};

struct BraggSignal {
    std::vector<double> t;        ///< s
    std::vector<double> dPdt;     ///< total
    std::vector<double> P;
    std::vector<double> X;        ///< sum of positions; zero unless closure on
    std::vector<double> trap_term;
    std::vector<double> casimir_term;
    std::vector<double> drive_term;

    /// P(tau) / tau.
    double time_averaged_rate() const;
};

/// Bragg drive kernel integral (hbar q V_B^2 / 2) int d(hbar omega') [S(q,w') - S(-q,-w')] sin((w-w')t)/(w-w').
double bragg_drive(const BraggPulse& pulse, const DsfSpectrum& forward, const DsfSpectrum& backward, double t);

/// Time integral of bragg_drive from 0 to t (closed form in t).
double bragg_momentum(const BraggPulse& pulse, const DsfSpectrum& forward, const DsfSpectrum& backward, double t);

/// Momentum-transfer equation over t in [0, tau].
BraggSignal bragg_signal(const BraggPulse& pulse, const DsfSpectrum& forward, const DsfSpectrum& backward,
                         const Quasi1DParams& params, const LateralPotential& potential,
                         const BraggOptions& options = {});

/// Long-pulse response against the DSF it probes. Both P(tau)/tau (V_B = 1)
/// and S_total are sampled on [low + 10/tau, high - 10/tau], where low/high
/// bound the union of the branch supports, and normalised to unit area there.
/// deviation = max |response - dsf| / max dsf.
struct ShapeComparison {
    std::vector<double> omega;
    std::vector<double> response;
    std::vector<double> dsf;
    double deviation = 0.0;
};
ShapeComparison long_pulse_shape(const DsfSpectrum& forward, double tau, std::size_t samples = 401);

/// |U_n| = Delta E / F(q_n). Throws DomainError at q_n = 0.
double invert_gap(double measured_gap, double q_n, const Quasi1DParams& params);

} // namespace casimir_bec
