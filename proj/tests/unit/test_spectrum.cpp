#include <doctest.h>

#include <cmath>

#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/spectrum.hpp"
#include "casimir_bec/units.hpp"

using namespace casimir_bec;

namespace {

struct Bench {
    AtomSpecies rb = rubidium87();
    Quasi1DParams p;
    LateralPotential pot;

    explicit Bench(double lambda_c = 9.75e-6, double h = 1e-6, double z = 3e-6)
    {
        TrapConfig t{units::angular(2.7e3), units::angular(0.83), 1e4, 0.0};
        p = derive_quasi1d(t, rb);
        SurfaceConfig s;
        s.fundamentals = {Fundamental{units::wavenumber_from_period(lambda_c), {h}}};
        s.z_cm = z;
        pot = lateral_coefficients(s, rb);
    }
};

double Hz(double E)
{
    return units::energy_to_frequency(E);
}

} // namespace

TEST_SUITE("spectrum")
{
    TEST_CASE("suppression factor")
    {
        const Bench b;
        const double q = 0.5 * b.pot.fundamentals[0].k_c;
        CHECK(suppression_factor(q, b.p.mu_tilde, b.rb) == doctest::Approx(0.07783721649).epsilon(1e-8));
        CHECK(suppression_factor(0.0, b.p.mu_tilde, b.rb) == 0.0);
        CHECK(suppression_factor(q, 0.0, b.rb) == doctest::Approx(1.0));
        // F = sqrt(T / (T + 2 mu))
        const double T = kinetic_energy(q, b.rb);
        CHECK(suppression_factor(q, b.p.mu_tilde, b.rb) == doctest::Approx(std::sqrt(T / (T + 2.0 * b.p.mu_tilde))));
    }

    TEST_CASE("benchmark gap report (independent oracle)")
    {
        const Bench b;
        const auto r = perturbative_gaps(b.p, b.pot);
        REQUIRE(r.entries.size() == 1);
        const auto& e = r.entries[0];
        CHECK(e.n == 1);
        CHECK(Hz(e.E_B) == doctest::Approx(77.56302905).epsilon(1e-8));
        CHECK(Hz(e.gap) == doctest::Approx(0.0175749612).epsilon(1e-8));
        CHECK(e.ratio() == doctest::Approx(e.gap / e.E_B));
        CHECK(r.warnings.empty());
        CHECK(r.find(0, 1) == &r.entries[0]);
        CHECK(r.find(0, 2) == nullptr);
    }

    TEST_CASE("near-surface gap report (independent oracle)")
    {
        const Bench b(4e-6, 50e-9, 0.7e-6);
        const auto r = perturbative_gaps(b.p, b.pot);
        CHECK(Hz(r.entries[0].gap) == doctest::Approx(4.064190653).epsilon(1e-8));
        CHECK(Hz(r.entries[0].E_B) == doctest::Approx(191.8690658).epsilon(1e-8));
        // |U| / E_B = 0.113 exceeds the perturbative threshold
        CHECK(r.warnings.size() == 1);
    }

    TEST_CASE("zero potential gives no gaps")
    {
        Bench b;
        b.pot.fundamentals[0].U = {0.0};
        CHECK(perturbative_gaps(b.p, b.pot).entries.empty());
    }

    TEST_CASE("two-branch spectrum")
    {
        const Bench b;
        const auto& s = b.pot.fundamentals[0];
        const auto gaps = perturbative_gaps(b.p, b.pot);
        const auto slice = band_branches(b.p, b.pot, 0, 1, {0.0, 0.1 * s.k_c, -0.25 * s.k_c});
        CHECK(slice.E_plus[0] - slice.E_minus[0] == doctest::Approx(gaps.entries[0].gap).epsilon(1e-12));
        CHECK(0.5 * (slice.E_plus[0] + slice.E_minus[0]) == doctest::Approx(gaps.entries[0].E_B));
        for (std::size_t i = 0; i < slice.eps.size(); ++i) {
            CHECK(slice.E_minus[i] <= slice.E_plus[i]);
            CHECK(slice.E_plus[i] - slice.E_minus[i] >= gaps.entries[0].gap * (1.0 - 1e-12));
        }
        CHECK_THROWS_AS(band_branches(b.p, s.k_c, s.U[0], 1, {0.3 * s.k_c}), DomainError);
        // no coupling: branches reduce to the unperturbed pair
        const auto bare = band_branches(b.p, s.k_c, 0.0, 1, {0.1 * s.k_c});
        const double Ea = bogoliubov_dispersion(0.6 * s.k_c, b.p.mu_tilde, b.p.mass);
        const double Eb = bogoliubov_dispersion(0.4 * s.k_c, b.p.mu_tilde, b.p.mass);
        CHECK(bare.E_plus[0] == doctest::Approx(Ea));
        CHECK(bare.E_minus[0] == doctest::Approx(Eb));
    }

    TEST_CASE("multibranch dispersion")
    {
        const auto rb = rubidium87();
        const double wr = units::angular(2.7e3);
        const double hw = constants::hbar * wr;
        CHECK(multibranch_dispersion(1, 0.0, 10.0 * hw, wr, rb) == 2.0 * hw);
        CHECK(multibranch_dispersion(2, 0.0, 10.0 * hw, wr, rb) == doctest::Approx(std::sqrt(12.0) * hw));
        // n = 0 sound speed is 1/sqrt(2) of the uniform-gas value at the same mu
        const double mu = 10.0 * hw;
        const double q = 1e3;
        const double c0 = multibranch_dispersion(0, q, mu, wr, rb) / (constants::hbar * q);
        CHECK(c0 == doctest::Approx(std::sqrt(mu / rb.mass) / std::sqrt(2.0)).epsilon(1e-12));
        CHECK_THROWS_AS(multibranch_dispersion(-1, q, mu, wr, rb), DomainError);
    }

    TEST_CASE("high-density gap")
    {
        const auto rb = rubidium87();
        const double wr = units::angular(2.7e3);
        const double mu = 10.0 * constants::hbar * wr;
        CHECK(high_density_regime(mu, wr));
        CHECK_FALSE(high_density_regime(constants::hbar * wr, wr));
        const double k = 6e5;
        const double U = units::frequency_to_energy(0.2);
        const double R = radial_tf_radius(mu, wr, rb);
        CHECK(gap_high_density(mu, wr, k, -U, rb) == doctest::Approx(0.075 * 0.5 * k * R * U));
    }

    TEST_CASE("coupled modes: well separated reproduces independent gaps")
    {
        const Bench b(4e-6, 50e-9, 0.7e-6);
        LateralPotential pot = b.pot;
        pot.fundamentals.push_back(HarmonicSeries{3.0 * pot.fundamentals[0].k_c, {pot.fundamentals[0].U[0]}});
        const auto r = coupled_mode_gaps(b.p, pot);
        CHECK(r.independent);
        for (const auto& s : r.splittings)
            CHECK(std::abs(s.relative_deviation()) < 0.01);
    }

    TEST_CASE("coupled modes: close fundamentals mix")
    {
        const Bench b(4e-6, 50e-9, 0.7e-6);
        LateralPotential pot = b.pot;
        pot.fundamentals.push_back(HarmonicSeries{pot.fundamentals[0].k_c * 88.0 / 89.0, {pot.fundamentals[0].U[0]}});
        const auto r = coupled_mode_gaps(b.p, pot);
        CHECK_FALSE(r.independent);
        CHECK(r.delta_k / r.delta_k_min == doctest::Approx(0.1).epsilon(0.05));
        CHECK(std::abs(r.splittings[0].relative_deviation()) > 0.10);
        CHECK(r.splittings[0].momenta.size() <= 64);
    }

    TEST_CASE("coupled modes: unsupported shapes")
    {
        const Bench b;
        CHECK_THROWS_AS(coupled_mode_gaps(b.p, b.pot), UnsupportedConfiguration);
        LateralPotential pot = b.pot;
        pot.fundamentals.push_back(HarmonicSeries{2e6, {1e-35, 1e-36}});
        CHECK_THROWS_AS(coupled_mode_gaps(b.p, pot), UnsupportedConfiguration);
    }

    TEST_CASE("minimum resolvable separation")
    {
        CHECK(min_resolvable_separation(1e6, -2.0, 10.0) == doctest::Approx(2e5));
        CHECK_THROWS_AS(min_resolvable_separation(1e6, 1.0, 0.0), DomainError);
    }
}
