#include "casimir_bec/bragg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/spectrum.hpp"

namespace casimir_bec {

using constants::hbar;

void BraggPulse::validate() const
{
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw DomainError("Bragg pulse: tau must be positive");
    if (!std::isfinite(q) || !std::isfinite(omega) || !std::isfinite(V_B))
        throw DomainError("Bragg pulse: q, omega and V_B must be finite");
}

double DsfBranch::resonance_omega() const
{
    return support_high / hbar;
}

double DsfSpectrum::step() const
{
    return omega.size() < 2 ? 0.0 : (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
}

std::vector<double> DsfSpectrum::total() const
{
    std::vector<double> out(omega.size(), 0.0);
    for (const auto& b : branches)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += b.S[i];
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count)
{
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

namespace {

void check_grid(const std::vector<double>& omega)
{
    if (omega.size() < 2)
        throw DomainError("DSF: frequency grid needs at least two points");
    const double step = (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
    if (!(step > 0.0))
        throw DomainError("DSF: frequency grid must be ascending");
    for (std::size_t i = 1; i < omega.size(); ++i)
        if (std::abs(omega[i] - omega[i - 1] - step) > 1e-6 * step)
            throw DomainError("DSF: frequency grid must be uniform");
}

std::optional<std::size_t> bin_of(const std::vector<double>& omega, double w)
{
    if (w < omega.front() || w >= omega.back())
        return std::nullopt;
    auto it = std::upper_bound(omega.begin(), omega.end(), w);
    return static_cast<std::size_t>(std::distance(omega.begin(), it)) - 1;
}

} // namespace

DsfSpectrum dsf_homogeneous(double q, const std::vector<double>& omega, const Quasi1DParams& params)
{
    check_grid(omega);
    const double E = bogoliubov_dispersion(q, params.mu_tilde, params.mass);
    const double w = E / hbar;
    const double step = (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
    if (w < omega.front() - 0.5 * step || w > omega.back() + 0.5 * step)
        throw DomainError("dsf_homogeneous: frequency grid does not cover the Bogoliubov resonance");
    const auto nearest = static_cast<std::size_t>(
        std::clamp(std::lround((w - omega.front()) / step), 0L, static_cast<long>(omega.size() - 1)));
    const double weight = E > 0.0 ? params.N * kinetic_energy(q, params.mass) / E : 0.0;

    DsfBranch b;
    b.sign = 0;
    b.S.assign(omega.size(), 0.0);
    b.S[nearest] = weight / (hbar * step);
    b.support_low = E;
    b.support_high = E;
    b.resonance_bin = nearest;
    b.delta = true;
    return DsfSpectrum{q, omega, {std::move(b)}};
}

double local_energy(double x, double q, const Quasi1DParams& params)
{
    const double h = params.half_length;
    if (std::abs(x) > h * (1.0 + 1e-12))
        throw DomainError("local spectrum: |x| exceeds the Thomas-Fermi half length");
    const double s = std::min(1.0, std::abs(x) / h);
    const double t = kinetic_energy(q, params.mass);
    return std::sqrt(t * t + 2.0 * t * params.mu_tilde * (1.0 - s * s));
}

double local_spectrum(double x, double q, const Quasi1DParams& params, double U, int sign)
{
    const double e0 = local_energy(x, q, params);
    const double t = kinetic_energy(q, params.mass);
    return e0 + sign * t * std::abs(U) / (2.0 * e0);
}

double local_spectrum_slope(double x, double q, const Quasi1DParams& params, double U, int sign)
{
    const double e0 = local_energy(x, q, params);
    const double t = kinetic_energy(q, params.mass);
    const double h = params.half_length;
    const double de0 = -2.0 * t * params.mu_tilde * x / (h * h * e0);
    return de0 * (1.0 - sign * t * std::abs(U) / (2.0 * e0 * e0));
}

double lda_turning_point(double E, double q, const Quasi1DParams& params, double U, int sign)
{
    double lo = 0.0;
    double hi = params.half_length;
    const double top = local_spectrum(lo, q, params, U, sign);
    const double bottom = local_spectrum(hi, q, params, U, sign);
    if (E > top || E < bottom)
        throw DomainError("lda_turning_point: energy outside the local spectrum range");
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (local_spectrum(mid, q, params, U, sign) > E)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * params.half_length)
            return 0.5 * (lo + hi);
    }
    std::ostringstream msg;
    msg << "lda_turning_point: bisection did not converge (E = " << E << " J, bracket [" << lo << ", " << hi << "] m)";
    throw InternalError(msg.str());
}

namespace {

double lda_sample(double E, double q, const Quasi1DParams& params, double U, int sign)
{
    const double x = lda_turning_point(E, q, params, U, sign);
    const double t = kinetic_energy(q, params.mass);
    const double weight = lda_density(params, x) * t / local_energy(x, q, params);
    return 2.0 * weight / std::abs(local_spectrum_slope(x, q, params, U, sign));
}

} // namespace

DsfSpectrum dsf_lda(double q, const std::vector<double>& omega, const Quasi1DParams& params, double U)
{
    check_grid(omega);
    const double step = (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
    const double t = kinetic_energy(q, params.mass);
    const double e_origin = local_energy(0.0, q, params);
    const std::vector<int> signs = U == 0.0 ? std::vector<int>{0} : std::vector<int>{-1, 1};

    if (!(t > 0.5 * std::abs(U)))
        throw DomainError("dsf_lda: |U| >= 2 T_q, the lower local branch reaches zero energy at the cloud edge");

    DsfSpectrum out{q, omega, {}};
    for (int sign : signs) {
        DsfBranch b;
        b.sign = sign;
        b.support_low = local_spectrum(params.half_length, q, params, U, sign);
        b.support_high = local_spectrum(0.0, q, params, U, sign);
        // E(x) ~ E(0) - a x^2 near the origin
        const double curvature = 1.0 - sign * t * std::abs(U) / (2.0 * e_origin * e_origin);
        const double a = t * params.mu_tilde * curvature / (params.half_length * params.half_length * e_origin);
        const double w0 = lda_density(params, 0.0) * t / e_origin;
        b.edge_coefficient = w0 / std::sqrt(a);
        b.S.assign(omega.size(), 0.0);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            const double E = hbar * omega[i];
            if (E > b.support_low && E < b.support_high)
                b.S[i] = lda_sample(E, q, params, U, sign);
        }
        b.resonance_bin = bin_of(omega, b.resonance_omega());
        if (b.resonance_bin) {
            const double E_cap = std::min(hbar * omega[*b.resonance_bin], b.support_high - 0.5 * hbar * step);
            b.S[*b.resonance_bin] = E_cap > b.support_low ? lda_sample(E_cap, q, params, U, sign) : 0.0;
        }
        out.branches.push_back(std::move(b));
    }
    return out;
}

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> gl_nodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> gl_weights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

// int_0^{s_max} g(s) ds, composite Gauss-Legendre.
template <class G>
double gauss_legendre(G&& g, double s_max, int panels)
{
    double sum = 0.0;
    const double width = s_max / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        for (std::size_t k = 0; k < gl_nodes.size(); ++k)
            sum += gl_weights[k] * g(mid + 0.5 * width * gl_nodes[k]);
    }
    return 0.5 * width * sum;
}

} // namespace

double branch_integral(const DsfSpectrum& spectrum, const DsfBranch& branch,
                       const std::function<double(double omega)>& f)
{
    const auto& omega = spectrum.omega;
    const double step = spectrum.step();
    if (branch.delta) {
        if (!branch.resonance_bin)
            return 0.0;
        return branch.S[*branch.resonance_bin] * hbar * step * f(branch.resonance_omega());
    }
    const double w_low = branch.support_low / hbar;
    const double w_edge = branch.resonance_omega();
    if (w_edge <= omega.front() || w_low >= omega.back())
        return 0.0;

    // Samples strictly inside the support and at least two bins below the
    // resonance are integrated by the trapezoid rule; the last stretch uses the
    // inverse-square-root edge form through E = E_edge - s^2.
    const bool edge_on_grid = w_edge < omega.back();
    std::size_t lo = 0;
    while (lo < omega.size() && omega[lo] <= w_low)
        ++lo;
    std::size_t hi = lo;
    const double tail_start = edge_on_grid ? w_edge - 2.0 * step : omega.back() + step;
    while (hi + 1 < omega.size() && omega[hi + 1] <= tail_start)
        ++hi;

    double sum = 0.0;
    const bool have_regular = lo < omega.size() && omega[lo] <= tail_start;
    if (have_regular) {
        for (std::size_t i = lo + 1; i <= hi; ++i)
            sum += 0.5 * hbar * step * (branch.S[i - 1] * f(omega[i - 1]) + branch.S[i] * f(omega[i]));
        // S vanishes linearly at the low edge
        sum += 0.5 * hbar * (omega[lo] - w_low) * branch.S[lo] * f(omega[lo]);
    }
    if (edge_on_grid) {
        const double w_start = have_regular ? omega[hi] : w_low;
        const double gap = hbar * (w_edge - w_start);
        const double C = have_regular ? branch.S[hi] * std::sqrt(gap) : branch.edge_coefficient;
        const double s_max = std::sqrt(gap);
        auto integrand = [&](double s) { return 2.0 * C * f(w_edge - s * s / hbar); };
        sum += gauss_legendre(integrand, s_max, 4);
    }
    return sum;
}

double branch_weight(const DsfSpectrum& spectrum, const DsfBranch& branch)
{
    return branch_integral(spectrum, branch, [](double) { return 1.0; });
}

DsfSpectrum zero_temperature_counterpart(const DsfSpectrum& forward)
{
    DsfSpectrum out{-forward.q, forward.omega, {}};
    DsfBranch b;
    b.sign = 0;
    b.S.assign(forward.omega.size(), 0.0);
    out.branches.push_back(std::move(b));
    return out;
}

namespace {

void check_pair(const DsfSpectrum& forward, const DsfSpectrum& backward)
{
    if (forward.branches.empty())
        throw ContractError("Bragg: forward spectrum S(q, omega) is missing");
    if (backward.branches.empty())
        throw ContractError("Bragg: backward spectrum S(-q, -omega) is missing");
    if (std::abs(forward.q + backward.q) > 1e-12 * std::abs(forward.q) || forward.q == 0.0)
        throw ContractError("Bragg: spectra must be sampled at +q and -q");
    if (forward.omega != backward.omega)
        throw ContractError("Bragg: spectra must share one frequency grid");
}

template <class Kernel>
double kernel_integral(const DsfSpectrum& forward, const DsfSpectrum& backward, Kernel&& kernel)
{
    double sum = 0.0;
    for (const auto& b : forward.branches)
        sum += branch_integral(forward, b, kernel);
    for (const auto& b : backward.branches)
        if (std::any_of(b.S.begin(), b.S.end(), [](double v) { return v != 0.0; }))
            sum -= branch_integral(backward, b, kernel);
    return sum;
}

} // namespace

double bragg_drive(const BraggPulse& pulse, const DsfSpectrum& forward, const DsfSpectrum& backward, double t)
{
    check_pair(forward, backward);
    const double prefactor = 0.5 * hbar * pulse.q * pulse.V_B * pulse.V_B;
    if (prefactor == 0.0 || t == 0.0)
        return 0.0;
    return prefactor * kernel_integral(forward, backward, [&](double w) {
               const double d = pulse.omega - w;
               return std::abs(d * t) < 1e-8 ? t : std::sin(d * t) / d;
           });
}

double bragg_momentum(const BraggPulse& pulse, const DsfSpectrum& forward, const DsfSpectrum& backward, double t)
{
    check_pair(forward, backward);
    const double prefactor = 0.5 * hbar * pulse.q * pulse.V_B * pulse.V_B;
    if (prefactor == 0.0 || t == 0.0)
        return 0.0;
    return prefactor * kernel_integral(forward, backward, [&](double w) {
               const double d = pulse.omega - w;
               if (std::abs(d * t) < 1e-4)
                   return 0.5 * t * t;
               const double half = std::sin(0.5 * d * t);
               return 2.0 * half * half / (d * d);
           });
}

double BraggSignal::time_averaged_rate() const
{
    if (t.empty() || t.back() == 0.0)
        return 0.0;
    return P.back() / t.back();
}

namespace {

// sum_n U_n (n k_c) int n_1(x) sin(n k_c x) dx for a density displaced by d.
// Nodes are placed symmetrically so the undisplaced integral cancels exactly.
double casimir_force(const Quasi1DParams& params, const LateralPotential& potential, double d, std::size_t points)
{
    if (potential.all_zero())
        return 0.0;
    const double h = params.half_length;
    const double reach = h + std::abs(d);
    const std::size_t K = std::max<std::size_t>(points / 2, 16);
    const double dx = reach / static_cast<double>(K);
    auto density = [&](double x) {
        const double s = (x - d) / h;
        if (std::abs(s) >= 1.0)
            return 0.0;
        return std::max(0.0, (params.mu_tilde * (1.0 - s * s) - lateral_eval(potential, x)) / params.g_eff);
    };
    double force = 0.0;
    for (const auto& series : potential.fundamentals) {
        for (std::size_t j = 0; j < series.U.size(); ++j) {
            if (series.U[j] == 0.0)
                continue;
            const double k = static_cast<double>(j + 1) * series.k_c;
            double integral = 0.0;
            for (std::size_t i = 1; i <= K; ++i) {
                const double x = dx * static_cast<double>(i);
                const double wgt = i == K ? 0.5 : 1.0;
                const double sx = std::sin(k * x);
                integral += wgt * (density(x) * sx - density(-x) * sx);
            }
            force += series.U[j] * k * integral * dx;
        }
    }
    return force;
}

} // namespace

BraggSignal bragg_signal(const BraggPulse& pulse, const DsfSpectrum& forward, const DsfSpectrum& backward,
                         const Quasi1DParams& params, const LateralPotential& potential, const BraggOptions& options)
{
    pulse.validate();
    check_pair(forward, backward);
    if (std::abs(forward.q - pulse.q) > 1e-12 * std::abs(pulse.q))
        throw ContractError("Bragg: spectrum momentum differs from the pulse momentum");
    if (options.time_points < 2)
        throw DomainError("Bragg: need at least two time points");
    const double step = forward.step();
    if (pulse.V_B != 0.0 && step * pulse.tau > 1.0)
        throw ContractError("Bragg: DSF frequency step too coarse to resolve the kernel (need d_omega * tau <= 1)");
    for (const auto& b : forward.branches) {
        if (b.delta)
            continue;
        if (b.support_low / hbar < forward.omega.front() || b.support_high / hbar >= forward.omega.back())
            throw ContractError("Bragg: DSF grid does not contain the full branch support");
    }

    const double m = params.mass;
    const double spring = m * params.omega_x * params.omega_x;
    const double N = params.N;

    BraggSignal out;
    out.t = linspace(0.0, pulse.tau, options.time_points);
    const std::size_t n = out.t.size();
    out.dPdt.resize(n);
    out.P.resize(n);
    out.X.assign(n, 0.0);
    out.trap_term.assign(n, 0.0);
    out.casimir_term.resize(n);
    out.drive_term.resize(n);

    if (!options.position_closure) {
        const double casimir = casimir_force(params, potential, options.displacement, options.density_points);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = out.t[i];
            out.drive_term[i] = bragg_drive(pulse, forward, backward, t);
            out.casimir_term[i] = casimir;
            out.dPdt[i] = out.drive_term[i] + casimir;
            out.P[i] = bragg_momentum(pulse, forward, backward, t) + casimir * t;
        }
        return out;
    }

    // closure: dP/dt = drive - m omega_x^2 X + casimir(d + X/N), dX/dt = P/m, X = sum_i x_i
    auto rhs = [&](double t, double P, double X, double& dP, double& dX) {
        dP = bragg_drive(pulse, forward, backward, t) - spring * X +
             casimir_force(params, potential, options.displacement + X / N, options.density_points);
        dX = P / m;
    };
    double P = 0.0;
    double X = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = out.t[i];
        out.P[i] = P;
        out.X[i] = X;
        out.drive_term[i] = bragg_drive(pulse, forward, backward, t);
        out.trap_term[i] = -spring * X;
        out.casimir_term[i] = casimir_force(params, potential, options.displacement + X / N, options.density_points);
        out.dPdt[i] = out.drive_term[i] + out.trap_term[i] + out.casimir_term[i];
        if (i + 1 == n)
            break;
        const double dt = out.t[i + 1] - t;
        double k1p, k1x, k2p, k2x, k3p, k3x, k4p, k4x;
        rhs(t, P, X, k1p, k1x);
        rhs(t + 0.5 * dt, P + 0.5 * dt * k1p, X + 0.5 * dt * k1x, k2p, k2x);
        rhs(t + 0.5 * dt, P + 0.5 * dt * k2p, X + 0.5 * dt * k2x, k3p, k3x);
        rhs(t + dt, P + dt * k3p, X + dt * k3x, k4p, k4x);
        P += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        X += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    }
    return out;
}

ShapeComparison long_pulse_shape(const DsfSpectrum& forward, double tau, std::size_t samples)
{
    if (forward.branches.empty() || samples < 3)
        throw DomainError("long_pulse_shape: empty spectrum or too few samples");
    double low = INFINITY;
    double high = -INFINITY;
    for (const auto& b : forward.branches) {
        low = std::min(low, b.support_low / hbar);
        high = std::max(high, b.support_high / hbar);
    }
    const double lo = low + 10.0 / tau;
    const double hi = high - 10.0 / tau;
    if (!(hi > lo))
        throw DomainError("long_pulse_shape: pulse too short to resolve the spectrum (support < 20 / tau)");
    const auto backward = zero_temperature_counterpart(forward);
    const auto total = forward.total();
    const double step = forward.step();

    ShapeComparison out;
    out.omega = linspace(lo, hi, samples);
    for (double w : out.omega) {
        const BraggPulse pulse{forward.q, w, 1.0, tau};
        out.response.push_back(bragg_momentum(pulse, forward, backward, tau) / tau);
        const double pos = (w - forward.omega.front()) / step;
        const auto i = std::min(static_cast<std::size_t>(pos), forward.omega.size() - 2);
        const double frac = pos - static_cast<double>(i);
        out.dsf.push_back((1.0 - frac) * total[i] + frac * total[i + 1]);
    }
    auto normalise = [&](std::vector<double>& v) {
        const double area = trapezoid(out.omega, v);
        for (auto& x : v)
            x /= area;
    };
    normalise(out.response);
    normalise(out.dsf);
    double diff = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        diff = std::max(diff, std::abs(out.response[i] - out.dsf[i]));
        peak = std::max(peak, out.dsf[i]);
    }
    out.deviation = diff / peak;
    return out;
}

double invert_gap(double measured_gap, double q_n, const Quasi1DParams& params)
{
    if (q_n == 0.0)
        throw DomainError("invert_gap: q_n = 0 has no suppression factor");
    const double F = suppression_factor(q_n, params.mu_tilde, params.mass);
    if (!(F > 0.0))
        throw DomainError("invert_gap: suppression factor vanishes");
    return std::abs(measured_gap) / F;
}

} // namespace casimir_bec
