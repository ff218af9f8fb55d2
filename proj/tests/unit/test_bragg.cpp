#include <doctest.h>

#include <cmath>

#include "casimir_bec/bragg.hpp"
#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/spectrum.hpp"
#include "casimir_bec/units.hpp"

using namespace casimir_bec;
using constants::hbar;

namespace {

struct Bench {
    AtomSpecies rb = rubidium87();
    Quasi1DParams p;
    LateralPotential pot;
    double q = 0.0;
    double U = 0.0;
    double T = 0.0;
    double E_B = 0.0;

    explicit Bench(double lambda_c = 9.75e-6, double h = 1e-6, double z = 3e-6)
    {
        TrapConfig t{units::angular(2.7e3), units::angular(0.83), 1e4, 0.0};
        p = derive_quasi1d(t, rb);
        SurfaceConfig s;
        s.fundamentals = {Fundamental{units::wavenumber_from_period(lambda_c), {h}}};
        s.z_cm = z;
        pot = lateral_coefficients(s, rb);
        q = 0.5 * pot.fundamentals[0].k_c;
        U = pot.fundamentals[0].U[0];
        T = kinetic_energy(q, p.mass);
        E_B = bogoliubov_dispersion(q, p.mu_tilde, p.mass);
    }

    std::vector<double> grid(std::size_t n) const { return linspace(0.5 * T / hbar, 1.2 * E_B / hbar, n); }
};

// S from the closed-form inverse of E(x): E0 = (E + sqrt(E^2 - 2 s T |U|)) / 2.
double analytic_S(const Bench& b, double E, int sign)
{
    const double T = b.T;
    const double u = std::abs(b.U);
    const double E0 = 0.5 * (E + std::sqrt(E * E - 2.0 * sign * T * u));
    const double h = b.p.half_length;
    const double x = h * std::sqrt(1.0 - (E0 * E0 - T * T) / (2.0 * T * b.p.mu_tilde));
    const double dE0 = -2.0 * T * b.p.mu_tilde * x / (h * h * E0);
    const double dE = dE0 * (1.0 - sign * T * u / (2.0 * E0 * E0));
    const double n1 = b.p.mu_tilde * (1.0 - x * x / (h * h)) / b.p.g_eff;
    return 2.0 * n1 * (T / E0) / std::abs(dE);
}

// 2 int_0^{L/2} n_1 (T / E0) f(E(x) / hbar) dx, composite Simpson.
template <class F>
double x_space_integral(const Bench& b, int sign, F&& f, int intervals = 200000)
{
    const double h = b.p.half_length;
    const double dx = h / intervals;
    double sum = 0.0;
    for (int i = 0; i <= intervals; ++i) {
        const double x = i * dx;
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double E0 = local_energy(x, b.q, b.p);
        const double E = local_spectrum(x, b.q, b.p, b.U, sign);
        sum += w * lda_density(b.p, x) * (b.T / E0) * f(E / hbar);
    }
    return 2.0 * sum * dx / 3.0;
}

} // namespace

TEST_SUITE("bragg")
{
    TEST_CASE("local spectrum")
    {
        const Bench b;
        CHECK(local_energy(0.0, b.q, b.p) == doctest::Approx(b.E_B));
        CHECK(local_energy(b.p.half_length, b.q, b.p) == doctest::Approx(b.T));
        CHECK(local_spectrum(0.0, b.q, b.p, b.U, +1) - local_spectrum(0.0, b.q, b.p, b.U, -1) ==
              doctest::Approx(std::abs(b.U) * b.T / b.E_B));
        CHECK_THROWS_AS(local_energy(1.01 * b.p.half_length, b.q, b.p), DomainError);
        // slope by central difference
        const double x = 0.3 * b.p.half_length;
        const double dx = 1e-6 * b.p.half_length;
        const double fd = (local_spectrum(x + dx, b.q, b.p, b.U, -1) - local_spectrum(x - dx, b.q, b.p, b.U, -1)) /
                          (2.0 * dx);
        CHECK(local_spectrum_slope(x, b.q, b.p, b.U, -1) == doctest::Approx(fd).epsilon(1e-7));
    }

    TEST_CASE("turning point inverts the local spectrum")
    {
        const Bench b;
        for (int sign : {-1, 1}) {
            const double E = local_spectrum(0.42 * b.p.half_length, b.q, b.p, b.U, sign);
            CHECK(lda_turning_point(E, b.q, b.p, b.U, sign) == doctest::Approx(0.42 * b.p.half_length).epsilon(1e-10));
        }
        CHECK_THROWS_AS(lda_turning_point(1.1 * b.E_B, b.q, b.p, b.U, 1), DomainError);
    }

    TEST_CASE("LDA samples against the closed-form inverse")
    {
        const Bench b;
        const auto omega = b.grid(2048);
        const auto s = dsf_lda(b.q, omega, b.p, b.U);
        REQUIRE(s.branches.size() == 2);
        for (std::size_t br = 0; br < 2; ++br) {
            const auto& branch = s.branches[br];
            const int sign = branch.sign;
            CHECK(sign == (br == 0 ? -1 : 1));
            int checked = 0;
            for (std::size_t i = 0; i < omega.size(); ++i) {
                const double E = hbar * omega[i];
                if (E <= branch.support_low || E >= branch.support_high || i == branch.resonance_bin)
                    continue;
                CHECK(branch.S[i] == doctest::Approx(analytic_S(b, E, sign)).epsilon(1e-7));
                ++checked;
            }
            CHECK(checked > 1000);
        }
    }

    TEST_CASE("supports and markers")
    {
        const Bench b;
        const auto s = dsf_lda(b.q, b.grid(4096), b.p, b.U);
        const auto& lo = s.branches[0];
        const auto& hi = s.branches[1];
        CHECK(lo.support_low == doctest::Approx(b.T - 0.5 * std::abs(b.U)));
        CHECK(hi.support_low == doctest::Approx(b.T + 0.5 * std::abs(b.U)));
        CHECK(hi.support_high - lo.support_high ==
              doctest::Approx(std::abs(b.U) * suppression_factor(b.q, b.p.mu_tilde, b.p.mass)).epsilon(1e-10));
        // only the upper branch lives between the two resonances
        for (std::size_t i = 0; i < s.omega.size(); ++i) {
            const double E = hbar * s.omega[i];
            if (E > lo.support_high && E <= hi.support_high && i != lo.resonance_bin)
                CHECK(lo.S[i] == 0.0);
        }
        REQUIRE(lo.resonance_bin);
        CHECK(s.omega[*lo.resonance_bin] <= lo.resonance_omega());
        CHECK(s.omega[*lo.resonance_bin + 1] > lo.resonance_omega());
        CHECK(std::isfinite(lo.S[*lo.resonance_bin]));
    }

    TEST_CASE("edge coefficient describes the divergence")
    {
        const Bench b;
        const auto s = dsf_lda(b.q, b.grid(64), b.p, b.U);
        for (int sign : {-1, 1}) {
            const auto& br = s.branches[sign < 0 ? 0 : 1];
            const double d = 1e-6 * br.support_high;
            const double E = br.support_high - d;
            CHECK(analytic_S(b, E, sign) * std::sqrt(d) == doctest::Approx(br.edge_coefficient).epsilon(1e-4));
        }
    }

    TEST_CASE("branch weight matches the x-space integral")
    {
        const Bench b;
        const auto s = dsf_lda(b.q, b.grid(16384), b.p, b.U);
        for (const auto& br : s.branches) {
            const double expected = x_space_integral(b, br.sign, [](double) { return 1.0; });
            CHECK(branch_weight(s, br) == doctest::Approx(expected).epsilon(2e-4));
        }
        // weight of each branch is N T / E0 averaged over the cloud, below N
        CHECK(branch_weight(s, s.branches[0]) < b.p.N);
    }

    TEST_CASE("kernel integral matches the x-space integral")
    {
        const Bench b;
        const auto s = dsf_lda(b.q, b.grid(16384), b.p, b.U);
        const double tau = 100.0 * hbar / b.E_B;
        for (double w : {0.6 * b.E_B / hbar, 0.97 * b.E_B / hbar, b.E_B / hbar}) {
            auto kernel = [&](double wp) {
                const double d = w - wp;
                return std::abs(d * tau) < 1e-4 ? 0.5 * tau * tau : (1.0 - std::cos(d * tau)) / (d * d);
            };
            for (const auto& br : s.branches) {
                const double expected = x_space_integral(b, br.sign, kernel);
                CHECK(branch_integral(s, br, kernel) == doctest::Approx(expected).epsilon(2e-3));
            }
        }
    }

    TEST_CASE("grid refinement")
    {
        const Bench b(4e-6, 50e-9, 0.7e-6);
        const auto fine = dsf_lda(b.q, b.grid(16384), b.p, b.U);
        const auto coarse = dsf_lda(b.q, b.grid(2048), b.p, b.U);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(branch_weight(coarse, coarse.branches[i]) ==
                  doctest::Approx(branch_weight(fine, fine.branches[i])).epsilon(0.02));
    }

    TEST_CASE("U = 0 gives one branch")
    {
        const Bench b;
        const auto s = dsf_lda(b.q, b.grid(1024), b.p, 0.0);
        REQUIRE(s.branches.size() == 1);
        CHECK(s.branches[0].sign == 0);
        CHECK(s.branches[0].support_high == doctest::Approx(b.E_B));
    }

    TEST_CASE("homogeneous weight")
    {
        const Bench b;
        const auto s = dsf_homogeneous(b.q, b.grid(4096), b.p);
        CHECK(branch_weight(s, s.branches[0]) == doctest::Approx(b.p.N * b.T / b.E_B).epsilon(1e-12));
        CHECK(s.branches[0].delta);
        CHECK_THROWS_AS(dsf_homogeneous(b.q, linspace(1.0, 2.0, 10), b.p), DomainError);
    }

    TEST_CASE("grid validation")
    {
        const Bench b;
        CHECK_THROWS_AS(dsf_lda(b.q, {1.0}, b.p, b.U), DomainError);
        CHECK_THROWS_AS(dsf_lda(b.q, {1.0, 2.0, 4.0}, b.p, b.U), DomainError);
        CHECK_THROWS_AS(dsf_lda(b.q, {3.0, 2.0, 1.0}, b.p, b.U), DomainError);
    }

    TEST_CASE("drive integrates to the momentum transfer")
    {
        const Bench b;
        const auto fwd = dsf_lda(b.q, b.grid(4096), b.p, b.U);
        const auto bwd = zero_temperature_counterpart(fwd);
        const double tau = 100.0 * hbar / b.E_B;
        const BraggPulse pulse{b.q, 0.98 * b.E_B / hbar, 1.0, tau};
        const int n = 400;
        const double dt = tau / n;
        double sum = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += w * bragg_drive(pulse, fwd, bwd, i * dt);
        }
        CHECK(sum * dt / 3.0 == doctest::Approx(bragg_momentum(pulse, fwd, bwd, tau)).epsilon(1e-6));
        CHECK(bragg_drive(pulse, fwd, bwd, 0.0) == 0.0);
    }

    TEST_CASE("zero drive gives an identically zero signal")
    {
        const Bench b;
        const auto fwd = dsf_lda(b.q, b.grid(4096), b.p, b.U);
        const auto bwd = zero_temperature_counterpart(fwd);
        const BraggPulse pulse{b.q, b.E_B / hbar, 0.0, 100.0 * hbar / b.E_B};
        for (bool closure : {false, true}) {
            BraggOptions opt;
            opt.time_points = 33;
            opt.position_closure = closure;
            const auto sig = bragg_signal(pulse, fwd, bwd, b.p, b.pot, opt);
            for (std::size_t i = 0; i < sig.t.size(); ++i) {
                CHECK(sig.P[i] == 0.0);
                CHECK(sig.dPdt[i] == 0.0);
                CHECK(sig.X[i] == 0.0);
                CHECK(sig.casimir_term[i] == 0.0);
            }
        }
    }

    TEST_CASE("displaced cloud feels the lateral force")
    {
        const Bench b;
        const auto fwd = dsf_lda(b.q, b.grid(4096), b.p, b.U);
        const auto bwd = zero_temperature_counterpart(fwd);
        const double tau = 100.0 * hbar / b.E_B;
        const BraggPulse pulse{b.q, b.E_B / hbar, 0.0, tau};
        BraggOptions opt;
        opt.time_points = 17;
        opt.displacement = 0.25 * 9.75e-6;
        const auto sig = bragg_signal(pulse, fwd, bwd, b.p, b.pot, opt);
        const double F = sig.casimir_term[0];
        CHECK(F != 0.0);
        CHECK(sig.P.back() == doctest::Approx(F * tau));

        // with the position closure and a small force the motion is a driven harmonic oscillation
        opt.position_closure = true;
        opt.time_points = 257;
        const auto osc = bragg_signal(pulse, fwd, bwd, b.p, b.pot, opt);
        const double w = b.p.omega_x;
        const double t = osc.t.back();
        const double X_expected = F / (b.p.mass * w * w) * (1.0 - std::cos(w * t));
        CHECK(osc.X.back() == doctest::Approx(X_expected).epsilon(1e-3));
        CHECK(osc.trap_term.back() == doctest::Approx(-b.p.mass * w * w * osc.X.back()));
    }

    TEST_CASE("contract violations")
    {
        const Bench b;
        const auto fwd = dsf_lda(b.q, b.grid(4096), b.p, b.U);
        const auto bwd = zero_temperature_counterpart(fwd);
        const double tau = 100.0 * hbar / b.E_B;
        BraggPulse pulse{b.q, b.E_B / hbar, 1.0, tau};

        auto wrong_q = bwd;
        wrong_q.q = 2.0 * b.q;
        CHECK_THROWS_AS(bragg_drive(pulse, fwd, wrong_q, tau), ContractError);
        auto wrong_grid = dsf_lda(b.q, b.grid(4000), b.p, b.U);
        CHECK_THROWS_AS(bragg_drive(pulse, fwd, zero_temperature_counterpart(wrong_grid), tau), ContractError);
        DsfSpectrum empty{-b.q, fwd.omega, {}};
        CHECK_THROWS_AS(bragg_momentum(pulse, fwd, empty, tau), ContractError);

        pulse.q = 1.5 * b.q;
        CHECK_THROWS_AS(bragg_signal(pulse, fwd, bwd, b.p, b.pot), ContractError);
        pulse.q = b.q;
        pulse.tau = 1e4 * tau;
        CHECK_THROWS_AS(bragg_signal(pulse, fwd, bwd, b.p, b.pot), ContractError);
        pulse.tau = -1.0;
        CHECK_THROWS_AS(bragg_signal(pulse, fwd, bwd, b.p, b.pot), DomainError);
    }

    TEST_CASE("long-pulse response follows the DSF shape")
    {
        const Bench b;
        const auto fwd = dsf_lda(b.q, b.grid(16384), b.p, b.U);
        const auto cmp = long_pulse_shape(fwd, 100.0 * hbar / b.E_B);
        CHECK(cmp.deviation < 0.05);
        CHECK(cmp.omega.size() == 401);
        CHECK_THROWS_AS(long_pulse_shape(fwd, 1e-3 * hbar / b.E_B), DomainError);
    }

    TEST_CASE("gap inversion")
    {
        const Bench b;
        const double F = suppression_factor(b.q, b.p.mu_tilde, b.p.mass);
        CHECK(invert_gap(std::abs(b.U) * F, b.q, b.p) == doctest::Approx(std::abs(b.U)));
        CHECK_THROWS_AS(invert_gap(1.0, 0.0, b.p), DomainError);
    }
}
