#include <doctest.h>

#include <cmath>

#include "casimir_bec/condensate.hpp"
#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/units.hpp"

using namespace casimir_bec;

namespace {

TrapConfig benchmark_trap()
{
    TrapConfig t;
    t.omega_r = units::angular(2.7e3);
    t.omega_x = units::angular(0.83);
    t.N = 1e4;
    return t;
}

SurfaceConfig benchmark_surface()
{
    SurfaceConfig s;
    s.fundamentals = {Fundamental{units::wavenumber_from_period(9.75e-6), {1e-6}}};
    s.z_cm = 3e-6;
    return s;
}

} // namespace

TEST_SUITE("condensate")
{
    TEST_CASE("benchmark reduction (independent oracle)")
    {
        const auto p = derive_quasi1d(benchmark_trap(), rubidium87());
        CHECK(units::to_micrometers(p.sigma) == doctest::Approx(0.2075433812).epsilon(1e-8));
        CHECK(units::energy_to_frequency(p.mu_tilde) == doctest::Approx(495.2200673).epsilon(1e-8));
        CHECK(units::to_micrometers(p.half_length) == doctest::Approx(408.9091161).epsilon(1e-8));
        CHECK(p.g_eff == doctest::Approx(2.0 * constants::hbar * p.omega_r * 5e-9));
        CHECK(p.mu == doctest::Approx(p.mu_tilde + constants::hbar * p.omega_r));
        CHECK(p.k_mu == doctest::Approx(std::sqrt(2.0 * p.mass * p.mu_tilde) / constants::hbar));
        CHECK(p.radial_frozen);
        CHECK(p.elongated);
    }

    TEST_CASE("chemical potential relations")
    {
        auto trap = benchmark_trap();
        trap.U_N_offset = units::frequency_to_energy(-3.0);
        const auto p = derive_quasi1d(trap, rubidium87());
        CHECK(mu_tilde_at_fixed_mu(p.mu, p.omega_r, trap.U_N_offset) == doctest::Approx(p.mu_tilde));
        // mu_tilde = m omega_x^2 (l/2)^2 / 2
        CHECK(p.mu_tilde == doctest::Approx(0.5 * p.mass * p.omega_x * p.omega_x * p.half_length * p.half_length));
    }

    TEST_CASE("density integrates to N")
    {
        const auto p = derive_quasi1d(benchmark_trap(), rubidium87());
        const auto prof = tf_axial_density(p, LateralPotential{}, {20001, false});
        CHECK(trapezoid(prof.x, prof.n1) == doctest::Approx(1e4).epsilon(1e-6));
        CHECK(lda_density(p, 0.0) == doctest::Approx(p.peak_density()));
        CHECK(lda_density(p, 1.01 * p.half_length) == 0.0);
    }

    TEST_CASE("lateral potential modulates the density")
    {
        const auto p = derive_quasi1d(benchmark_trap(), rubidium87());
        const auto pot = lateral_coefficients(benchmark_surface(), rubidium87());
        const auto flat = tf_axial_density(p, pot, {4097, false});
        const auto mod = tf_axial_density(p, pot, {4097, true});
        const std::size_t mid = 2048;
        CHECK(flat.x[mid] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(mod.n1[mid] - flat.n1[mid] == doctest::Approx(-lateral_eval(pot, flat.x[mid]) / p.g_eff));
    }

    TEST_CASE("positivity violation names the coefficient")
    {
        const auto p = derive_quasi1d(benchmark_trap(), rubidium87());
        LateralPotential pot;
        pot.fundamentals = {HarmonicSeries{1e6, {-1.2 * p.mu_tilde}}};
        try {
            tf_axial_density(p, pot);
            FAIL("expected DomainError");
        }
        catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("largest coefficient") != std::string::npos);
        }
    }

    TEST_CASE("trap validation")
    {
        auto t = benchmark_trap();
        t.N = 0.0;
        CHECK_THROWS_AS(derive_quasi1d(t, rubidium87()), DomainError);
        t = benchmark_trap();
        t.omega_x = t.omega_r;
        CHECK_FALSE(t.validity_warnings().empty());
        CHECK(benchmark_trap().validity_warnings().empty());
    }

    TEST_CASE("dispersion")
    {
        const double m = rubidium87().mass;
        const double q = 3.2e5;
        const double T = kinetic_energy(q, m);
        CHECK(T == doctest::Approx(constants::hbar * constants::hbar * q * q / (2.0 * m)));
        CHECK(bogoliubov_dispersion(q, 0.0, m) == doctest::Approx(T));
        CHECK(bogoliubov_dispersion(0.0, 1e-30, m) == 0.0);
        CHECK_THROWS_AS(bogoliubov_dispersion(q, -1.0, m), DomainError);
    }

    TEST_CASE("regime report at the benchmark")
    {
        const auto rb = rubidium87();
        const auto p = derive_quasi1d(benchmark_trap(), rb);
        const auto pot = lateral_coefficients(benchmark_surface(), rb);
        const auto r = regime_check(p, benchmark_surface(), pot, rb, 300.0, 1e-9);
        for (const char* name : {"radial_frozen", "trap_aspect", "single_harmonic_dominance", "axial_thomas_fermi",
                                 "perturbative_coupling", "retarded_limit"}) {
            CAPTURE(name);
            REQUIRE(r.find(name) != nullptr);
            CHECK(r.find(name)->pass);
        }
        CHECK(r.find("perturbative_coupling")->value == doctest::Approx(0.2257912345 / 77.56302905).epsilon(1e-7));
        // 1 um corrugation at 3 um is outside the first-order comfort zone
        CHECK_FALSE(r.find("first_order_corrugation")->pass);
        CHECK_FALSE(r.all_pass());
    }

    TEST_CASE("temperature for global coherence lies in the nK range")
    {
        const auto rb = rubidium87();
        const auto p = derive_quasi1d(benchmark_trap(), rb);
        // L_phi = l at T = 2 n hbar^2 / (k_B m l)
        const double T = 2.0 * p.peak_density() * constants::hbar * constants::hbar /
                         (constants::k_B * rb.mass * 2.0 * p.half_length);
        CHECK(coherence_length(p.peak_density(), T, rb) == doctest::Approx(2.0 * p.half_length));
        CHECK(T > 0.1e-9);
        CHECK(T < 10e-9);
    }

    TEST_CASE("thermal photon wavelength")
    {
        CHECK(thermal_photon_wavelength(300.0) == doctest::Approx(7.634e-6).epsilon(1e-3));
    }
}
