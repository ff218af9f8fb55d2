#include "casimir_bec/condensate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/units.hpp"

namespace casimir_bec {

using constants::hbar;

void TrapConfig::validate() const
{
    if (!(omega_r > 0.0) || !(omega_x > 0.0) || !std::isfinite(omega_r) || !std::isfinite(omega_x))
        throw DomainError("trap: frequencies must be positive");
    if (!(N >= 1.0) || !std::isfinite(N))
        throw DomainError("trap: N must be >= 1");
    if (!std::isfinite(U_N_offset))
        throw DomainError("trap: U_N offset must be finite");
}

std::vector<std::string> TrapConfig::validity_warnings() const
{
    std::vector<std::string> out;
    if (omega_r / omega_x <= 10.0) {
        std::ostringstream msg;
        msg << "trap aspect ratio omega_r/omega_x = " << omega_r / omega_x << " is not >> 1";
        out.push_back(msg.str());
    }
    return out;
}

Quasi1DParams derive_quasi1d(const TrapConfig& trap, const AtomSpecies& species)
{
    trap.validate();
    species.validate();
    const double m = species.mass;
    Quasi1DParams p;
    p.N = trap.N;
    p.omega_r = trap.omega_r;
    p.omega_x = trap.omega_x;
    p.mass = m;
    p.sigma = std::sqrt(hbar / (m * trap.omega_r));
    const double g3d = 4.0 * constants::pi * hbar * hbar * species.scattering_length / m;
    p.g_eff = g3d / (2.0 * constants::pi * p.sigma * p.sigma);
    p.half_length = std::cbrt(3.0 * p.g_eff * trap.N / (2.0 * m * trap.omega_x * trap.omega_x));
    p.mu_tilde = 0.5 * m * trap.omega_x * trap.omega_x * p.half_length * p.half_length;
    if (!(p.mu_tilde > 0.0) || !std::isfinite(p.mu_tilde))
        throw DomainError("derive_quasi1d: non-positive effective chemical potential");
    p.mu = p.mu_tilde + hbar * trap.omega_r + trap.U_N_offset;
    p.k_mu = std::sqrt(2.0 * m * p.mu_tilde) / hbar;
    p.radial_frozen = p.mu_tilde < 0.1 * 8.0 * hbar * trap.omega_r;
    p.elongated = trap.omega_r / trap.omega_x > 10.0;
    return p;
}

double mu_tilde_at_fixed_mu(double mu, double omega_r, double U_N)
{
    return mu - hbar * omega_r - U_N;
}

double lda_density(const Quasi1DParams& params, double x)
{
    const double s = 2.0 * x / (2.0 * params.half_length);
    if (std::abs(s) >= 1.0)
        return 0.0;
    return params.mu_tilde * (1.0 - s * s) / params.g_eff;
}

DensityProfile tf_axial_density(const Quasi1DParams& params, const LateralPotential& potential,
                                const DensityOptions& options)
{
    if (options.points < 3)
        throw DomainError("tf_axial_density: need at least 3 grid points");
    if (options.superpose_potential && !(params.mu_tilde > potential.total_amplitude())) {
        double largest = 0.0;
        for (const auto& f : potential.fundamentals)
            for (double u : f.U)
                largest = std::max(largest, std::abs(u));
        std::ostringstream msg;
        msg << "Thomas-Fermi positivity violated: mu_tilde = " << units::energy_to_frequency(params.mu_tilde)
            << " Hz does not exceed sum |U_n| = " << units::energy_to_frequency(potential.total_amplitude())
            << " Hz (largest coefficient |U| = " << units::energy_to_frequency(largest) << " Hz)";
        throw DomainError(msg.str());
    }
    DensityProfile out;
    out.x.resize(options.points);
    out.n1.resize(options.points);
    const double L = params.half_length;
    const double dx = 2.0 * L / static_cast<double>(options.points - 1);
    for (std::size_t i = 0; i < options.points; ++i) {
        const double x = -L + dx * static_cast<double>(i);
        const double s = x / L;
        double local = params.mu_tilde * (1.0 - s * s);
        if (options.superpose_potential)
            local -= lateral_eval(potential, x);
        out.x[i] = x;
        out.n1[i] = std::max(0.0, local / params.g_eff);
    }
    return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y)
{
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

double kinetic_energy(double q, double mass)
{
    return hbar * hbar * q * q / (2.0 * mass);
}

double kinetic_energy(double q, const AtomSpecies& species)
{
    return kinetic_energy(q, species.mass);
}

double bogoliubov_dispersion(double q, double mu_tilde, double mass)
{
    if (mu_tilde < 0.0)
        throw DomainError("bogoliubov_dispersion: mu_tilde must be >= 0");
    const double t = kinetic_energy(q, mass);
    return std::sqrt(t * (t + 2.0 * mu_tilde));
}

double bogoliubov_dispersion(double q, double mu_tilde, const AtomSpecies& species)
{
    return bogoliubov_dispersion(q, mu_tilde, species.mass);
}

double coherence_length(double n1_peak, double T_bec, const AtomSpecies& species)
{
    if (!(T_bec > 0.0))
        throw DomainError("coherence_length: T_bec must be positive");
    if (!(n1_peak > 0.0))
        throw DomainError("coherence_length: density must be positive");
    return 2.0 * n1_peak * hbar * hbar / (constants::k_B * T_bec * species.mass);
}

double thermal_photon_wavelength(double T_env)
{
    if (!(T_env > 0.0))
        throw DomainError("thermal_photon_wavelength: temperature must be positive");
    return hbar * constants::c / (constants::k_B * T_env);
}

bool RegimeReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const RegimeCheck& c) { return c.pass; });
}

const RegimeCheck* RegimeReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

namespace {

RegimeCheck below(std::string name, double value, double threshold, std::string note)
{
    return {std::move(name), value, threshold, value < threshold, "value < threshold", std::move(note)};
}

RegimeCheck above(std::string name, double value, double threshold, std::string note)
{
    return {std::move(name), value, threshold, value > threshold, "value > threshold", std::move(note)};
}

} // namespace

RegimeReport regime_check(const Quasi1DParams& params, const SurfaceConfig& surface,
                          const LateralPotential& potential, const AtomSpecies& species, double T_env,
                          double T_bec)
{
    RegimeReport r;
    const double hw_r = hbar * params.omega_r;
    r.checks.push_back(below("radial_frozen", params.mu_tilde / (8.0 * hw_r), 0.1,
                             "mu_tilde / (8 hbar omega_r); quasi-1D needs << 1"));
    r.checks.push_back(above("trap_aspect", params.omega_r / params.omega_x, 10.0, "omega_r / omega_x"));

    if (!surface.fundamentals.empty()) {
        const double k_c = surface.fundamentals.front().k_c;
        const double q1 = 0.5 * k_c;
        r.checks.push_back(above("single_harmonic_dominance", k_c * surface.z_cm, 1.0,
                                 "k_c z_cm; the j = 1 term dominates for k_c z_cm >> 1"));
        r.checks.push_back(below("axial_thomas_fermi", kinetic_energy(q1, species) / params.mu_tilde, 0.1,
                                 "T(k_c/2) / mu_tilde"));
        r.checks.push_back(above("coherence_vs_period",
                                 coherence_length(params.peak_density(), T_bec, species) * k_c /
                                     constants::two_pi,
                                 1.0, "L_phi / lambda_c; sufficient for probing the lateral force"));
        if (!potential.fundamentals.empty() && !potential.fundamentals.front().U.empty()) {
            const double U1 = std::abs(potential.fundamentals.front().U.front());
            r.checks.push_back(below("perturbative_coupling", U1 / bogoliubov_dispersion(q1, params.mu_tilde, species),
                                     0.1, "|U_1| / E_B(k_c/2)"));
        }
    }
    r.checks.push_back(above("coherence_vs_length",
                             coherence_length(params.peak_density(), T_bec, species) /
                                 (2.0 * params.half_length),
                             1.0, "L_phi / l; global axial coherence"));
    r.checks.push_back(below("thermal_casimir", surface.z_cm / thermal_photon_wavelength(T_env), 0.1,
                             "z_cm / lambda_T, lambda_T = hbar c / k_B T_env; thermal corrections ignored"));
    r.checks.push_back(above("retarded_limit", surface.z_cm / species.transition_wavelength, 3.0,
                             "z_cm / lambda_A; perfect-reflector response assumes retardation"));
    r.checks.push_back(below("first_order_corrugation", surface.max_amplitude() / surface.z_cm, 0.3,
                             "h / z_cm; first-order expansion in the corrugation amplitude"));
    return r;
}

} // namespace casimir_bec
