#include "casimir_bec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/units.hpp"

namespace casimir_bec {

using constants::hbar;

double suppression_factor(double q, double mu_tilde, double mass)
{
    if (q == 0.0)
        return 0.0;
    // T / sqrt(T (T + 2 mu)) written without cancellation
    const double t = kinetic_energy(q, mass);
    return std::sqrt(t / (t + 2.0 * mu_tilde));
}

double suppression_factor(double q, double mu_tilde, const AtomSpecies& species)
{
    return suppression_factor(q, mu_tilde, species.mass);
}

double GapEntry::coupling_ratio() const
{
    return E_B > 0.0 ? std::abs(U_n) / E_B : 0.0;
}

const GapEntry* GapReport::find(std::size_t fundamental, int n) const
{
    for (const auto& e : entries)
        if (e.fundamental == fundamental && e.n == n)
            return &e;
    return nullptr;
}

GapReport perturbative_gaps(const Quasi1DParams& params, const LateralPotential& potential)
{
    GapReport report;
    report.mu_tilde = params.mu_tilde;
    for (std::size_t f = 0; f < potential.fundamentals.size(); ++f) {
        const auto& series = potential.fundamentals[f];
        for (std::size_t j = 0; j < series.U.size(); ++j) {
            if (series.U[j] == 0.0)
                continue;
            GapEntry e;
            e.fundamental = f;
            e.n = static_cast<int>(j + 1);
            e.k_c = series.k_c;
            e.q_n = 0.5 * e.n * series.k_c;
            e.U_n = series.U[j];
            e.F = suppression_factor(e.q_n, params.mu_tilde, params.mass);
            e.gap = std::abs(e.U_n) * e.F;
            e.E_B = bogoliubov_dispersion(e.q_n, params.mu_tilde, params.mass);
            if (e.coupling_ratio() > 0.1) {
                std::ostringstream msg;
                msg << "fundamental " << f + 1 << ", n = " << e.n << ": |U_n| / E_B(q_n) = " << e.coupling_ratio()
                    << " > 0.1, first-order gap unreliable";
                report.warnings.push_back(msg.str());
            }
            report.entries.push_back(e);
        }
    }
    return report;
}

namespace {

// |u_p + v_p| of a Bogoliubov mode: sqrt(T_p / E_p).
double density_amplitude(double p, double mu_tilde, double mass)
{
    return std::sqrt(suppression_factor(p, mu_tilde, mass));
}

} // namespace

BranchSlice band_branches(const Quasi1DParams& params, double k_c, double U_n, int n,
                          const std::vector<double>& eps)
{
    if (n < 1)
        throw DomainError("band_branches: harmonic index must be >= 1");
    const double q_n = 0.5 * n * k_c;
    BranchSlice out;
    out.n = n;
    out.k_c = k_c;
    out.U_n = U_n;
    for (double e : eps) {
        if (std::abs(e) > 0.25 * k_c * (1.0 + 1e-12))
            throw DomainError("band_branches: |eps| must not exceed k_c / 4");
        const double a = q_n + e;
        const double b = -q_n + e;
        const double Ea = bogoliubov_dispersion(a, params.mu_tilde, params.mass);
        const double Eb = bogoliubov_dispersion(b, params.mu_tilde, params.mass);
        const double coupling = 0.5 * std::abs(U_n) * density_amplitude(a, params.mu_tilde, params.mass) *
                                density_amplitude(b, params.mu_tilde, params.mass);
        const double mean = 0.5 * (Ea + Eb);
        const double half = std::hypot(0.5 * (Ea - Eb), coupling);
        out.eps.push_back(e);
        out.E_minus.push_back(mean - half);
        out.E_plus.push_back(mean + half);
        out.E_B.push_back(Ea);
    }
    return out;
}

BranchSlice band_branches(const Quasi1DParams& params, const LateralPotential& potential, std::size_t fundamental,
                          int n, const std::vector<double>& eps)
{
    if (fundamental >= potential.fundamentals.size())
        throw DomainError("band_branches: no such fundamental");
    const auto& series = potential.fundamentals[fundamental];
    const double U = (n >= 1 && static_cast<std::size_t>(n) <= series.U.size()) ? series.U[n - 1] : 0.0;
    return band_branches(params, series.k_c, U, n, eps);
}

double radial_tf_radius(double mu, double omega_r, const AtomSpecies& species)
{
    return std::sqrt(2.0 * mu / (species.mass * omega_r * omega_r));
}

bool high_density_regime(double mu, double omega_r)
{
    return mu / (hbar * omega_r) >= 5.0;
}

double gap_high_density(double mu, double omega_r, double k_c, double U_n, const AtomSpecies& species)
{
    if (!(mu > 0.0))
        throw DomainError("gap_high_density: mu must be positive");
    const double R = radial_tf_radius(mu, omega_r, species);
    return (3.0 * hbar * omega_r / (4.0 * mu)) * (0.5 * k_c * R) * std::abs(U_n);
}

double multibranch_dispersion(int n, double q, double mu, double omega_r, const AtomSpecies& species)
{
    if (n < 0)
        throw DomainError("multibranch_dispersion: radial quantum number must be >= 0");
    const double hw = hbar * omega_r;
    const double qR = q * radial_tf_radius(mu, omega_r, species);
    const double e2 = 2.0 * hw * hw * n * (n + 1) + qR * qR * 0.25 * hw * hw;
    return std::sqrt(e2);
}

double min_resolvable_separation(double k_c, double U, double E0)
{
    if (!(E0 > 0.0))
        throw DomainError("min_resolvable_separation: E0 must be positive");
    return k_c * std::abs(U) / E0;
}

double CoupledSplitting::relative_deviation() const
{
    if (independent_gap == 0.0)
        return splitting == 0.0 ? 0.0 : INFINITY;
    return (splitting - independent_gap) / independent_gap;
}

namespace {

struct Coupling {
    double k;
    double U;
};

CoupledSplitting cluster_splitting(const Quasi1DParams& params, std::size_t index, const std::vector<Coupling>& couplings)
{
    const double mu = params.mu_tilde;
    const double m = params.mass;
    const double k_c = couplings[index].k;
    const double q0 = 0.5 * k_c;
    const double E0 = bogoliubov_dispersion(q0, mu, m);

    double window = 0.0;
    double k_min = k_c;
    for (const auto& c : couplings) {
        window += 2.0 * std::abs(c.U);
        k_min = std::min(k_min, c.k);
    }
    const double same = 1e-9 * k_min;
    constexpr std::size_t max_states = 64;

    std::vector<double> states{q0};
    std::vector<double> frontier{q0};
    while (!frontier.empty() && states.size() < max_states) {
        std::vector<double> next;
        for (double p : frontier) {
            for (const auto& c : couplings) {
                for (double sign : {1.0, -1.0}) {
                    const double candidate = p + sign * c.k;
                    const bool known = std::any_of(states.begin(), states.end(),
                                                   [&](double s) { return std::abs(s - candidate) < same; });
                    if (known || states.size() >= max_states)
                        continue;
                    if (std::abs(bogoliubov_dispersion(candidate, mu, m) - E0) <= window) {
                        states.push_back(candidate);
                        next.push_back(candidate);
                    }
                }
            }
        }
        frontier = std::move(next);
    }

    const auto D = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D, D);
    for (Eigen::Index i = 0; i < D; ++i) {
        H(i, i) = bogoliubov_dispersion(states[i], mu, m);
        for (Eigen::Index j = 0; j < D; ++j) {
            if (i == j)
                continue;
            for (const auto& c : couplings) {
                if (std::abs(std::abs(states[i] - states[j]) - c.k) < same)
                    H(i, j) -= 0.5 * c.U * density_amplitude(states[i], mu, m) * density_amplitude(states[j], mu, m);
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();

    Eigen::Index partner = -1;
    for (Eigen::Index i = 0; i < D; ++i)
        if (std::abs(states[i] + q0) < same)
            partner = i;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(D));
    std::iota(order.begin(), order.end(), 0);
    auto weight = [&](Eigen::Index col) {
        double w = vectors(0, col) * vectors(0, col);
        if (partner >= 0)
            w += vectors(partner, col) * vectors(partner, col);
        return w;
    };
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return weight(a) > weight(b); });

    CoupledSplitting out;
    out.fundamental = index;
    out.k_c = k_c;
    out.U = couplings[index].U;
    out.momenta = states;
    out.eigenvalues.assign(values.data(), values.data() + D);
    if (D >= 2) {
        const double a = values(order[0]);
        const double b = values(order[1]);
        out.splitting = std::abs(a - b);
    }
    out.independent_gap = std::abs(out.U) * suppression_factor(q0, mu, m);
    return out;
}

} // namespace

CoupledModeReport coupled_mode_gaps(const Quasi1DParams& params, const LateralPotential& potential)
{
    if (potential.fundamentals.size() != 2)
        throw UnsupportedConfiguration("coupled_mode_gaps: exactly two corrugation fundamentals are supported, got " +
                                       std::to_string(potential.fundamentals.size()));
    std::vector<Coupling> couplings;
    for (const auto& f : potential.fundamentals) {
        for (std::size_t j = 1; j < f.U.size(); ++j)
            if (f.U[j] != 0.0)
                throw UnsupportedConfiguration("coupled_mode_gaps: each fundamental must carry a single harmonic");
        couplings.push_back({f.k_c, f.U.empty() ? 0.0 : f.U.front()});
    }
    CoupledModeReport report;
    report.delta_k = std::abs(couplings[0].k - couplings[1].k);
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        const double E = bogoliubov_dispersion(0.5 * couplings[i].k, params.mu_tilde, params.mass);
        report.delta_k_min = std::max(report.delta_k_min, min_resolvable_separation(couplings[i].k, couplings[i].U, E));
        report.splittings.push_back(cluster_splitting(params, i, couplings));
    }
    report.independent = report.delta_k > 10.0 * report.delta_k_min;
    return report;
}

} // namespace casimir_bec
