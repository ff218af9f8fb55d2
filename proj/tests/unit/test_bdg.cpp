#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "casimir_bec/bdg.hpp"
#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"
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

// Positive BdG energies from the symmetric reduced problem: E^2 are the
// eigenvalues of sqrt(T) (T + 2A) sqrt(T).
std::vector<double> reduced_energies(const BdgProblem& prob)
{
    const int D = prob.basis_size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(D, D);
    Eigen::VectorXd T(D);
    for (int i = 0; i < D; ++i) {
        const double k = prob.momentum(i);
        T(i) = constants::hbar * constants::hbar * k * k / (2.0 * prob.mass);
        A(i, i) = prob.mu_tilde;
    }
    for (const auto& h : prob.harmonics)
        for (int i = 0; i + h.multiple < D; ++i) {
            A(i, i + h.multiple) -= 0.5 * h.U;
            A(i + h.multiple, i) -= 0.5 * h.U;
        }
    Eigen::MatrixXd S = T.cwiseSqrt().asDiagonal() * (Eigen::MatrixXd(T.asDiagonal()) + 2.0 * A) *
                        T.cwiseSqrt().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S / prob.mu_tilde / prob.mu_tilde);
    std::vector<double> out;
    for (int i = 0; i < D; ++i)
        out.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))) * prob.mu_tilde);
    return out;
}

} // namespace

TEST_SUITE("bdg")
{
    TEST_CASE("free spectrum equals E_B on every plane wave")
    {
        Bench b;
        b.pot.fundamentals[0].U = {0.0};
        const double qb = 0.3 * b.pot.fundamentals[0].k_c;
        const auto prob = make_bdg_problem(b.p, b.pot, qb, 8);
        const auto spec = solve_bdg(prob);
        std::vector<double> expected;
        for (int i = 0; i < prob.basis_size(); ++i)
            expected.push_back(bogoliubov_dispersion(prob.momentum(i), b.p.mu_tilde, b.p.mass));
        std::sort(expected.begin(), expected.end());
        REQUIRE(spec.positive.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(spec.positive[i] == doctest::Approx(expected[i]).epsilon(1e-10));
    }

    TEST_CASE("matrix layout")
    {
        const Bench b;
        const auto prob = make_bdg_problem(b.p, b.pot, 0.0, 4);
        const auto H = build_bdg(prob);
        const int D = prob.basis_size();
        REQUIRE(H.rows() == 2 * D);
        const double U = b.pot.fundamentals[0].U[0];
        CHECK(H(0, D) == doctest::Approx(b.p.mu_tilde));
        CHECK(H(0, 1) == doctest::Approx(-0.5 * U));
        CHECK(H(D, 0) == doctest::Approx(-b.p.mu_tilde));
        CHECK(H(D + 1, D) == doctest::Approx(0.5 * U));
    }

    TEST_CASE("non-symmetric solve agrees with the reduced symmetric oracle")
    {
        const Bench b(4e-6, 50e-9, 0.7e-6);
        for (double frac : {0.0, 0.17, 0.5}) {
            const auto prob = make_bdg_problem(b.p, b.pot, frac * b.pot.fundamentals[0].k_c, 12);
            const auto full = solve_bdg(prob);
            const auto reduced = reduced_energies(prob);
            REQUIRE(full.positive.size() == reduced.size());
            for (std::size_t i = 0; i < reduced.size(); ++i) {
                CAPTURE(i);
                CHECK(full.positive[i] == doctest::Approx(reduced[i]).epsilon(1e-9).scale(b.p.mu_tilde));
            }
        }
    }

    TEST_CASE("zone-edge gap (independent oracle)")
    {
        const Bench b;
        const auto prob = make_bdg_problem(b.p, b.pot, 0.0, 16);
        const double q = 0.5 * b.pot.fundamentals[0].k_c;
        const auto split = zone_edge_splitting(prob, q);
        CHECK(units::energy_to_frequency(split.lower) == doctest::Approx(77.55423895).epsilon(1e-8));
        CHECK(units::energy_to_frequency(split.upper) == doctest::Approx(77.57181391).epsilon(1e-8));
        CHECK(units::energy_to_frequency(split.gap()) == doctest::Approx(0.01757496168).epsilon(1e-6));

        const Bench near(4e-6, 50e-9, 0.7e-6);
        const auto p2 = make_bdg_problem(near.p, near.pot, 0.0, 16);
        const auto s2 = zone_edge_splitting(p2, 0.5 * near.pot.fundamentals[0].k_c);
        CHECK(units::energy_to_frequency(s2.gap()) == doctest::Approx(4.065051011).epsilon(1e-8));
    }

    TEST_CASE("gap scales linearly in U")
    {
        const Bench b;
        const double q = 0.5 * b.pot.fundamentals[0].k_c;
        const double g1 = zone_edge_splitting(make_bdg_problem(b.p, b.pot, 0.0, 16), q).gap();
        LateralPotential half = b.pot;
        half.fundamentals[0].U[0] *= 0.5;
        const double g2 = zone_edge_splitting(make_bdg_problem(b.p, half, 0.0, 16), q).gap();
        CHECK(g2 / g1 == doctest::Approx(0.5).epsilon(1e-6));
    }

    TEST_CASE("Goldstone mode at q_b = 0")
    {
        const Bench b;
        const auto spec = solve_bdg(make_bdg_problem(b.p, b.pot, 0.0, 8));
        CHECK(spec.positive.front() == 0.0);
        CHECK(spec.max_imaginary < 1e-8 * b.p.mu_tilde);
    }

    TEST_CASE("band solve, convergence and oracle comparison")
    {
        const Bench b;
        BdgBandOptions opt;
        opt.q_points = 5;
        opt.band_count = 4;
        const auto bands = solve_bdg_bands(b.p, b.pot, opt);
        CHECK(bands.q_b.size() == 5);
        CHECK(bands.bands.front().size() == 4);
        CHECK(bands.converged);
        REQUIRE(bands.gaps.size() == 1);
        CHECK(bands.gaps[0].drift() < 1e-6);
        const auto pert = perturbative_gaps(b.p, b.pot);
        const auto cmp = oracle_compare(pert, bands);
        REQUIRE(cmp.rows.size() == 1);
        CHECK(cmp.rows[0].pass);
        CHECK(cmp.rows[0].relative_deviation < 1e-6);
        CHECK(cmp.rows[0].tolerance == doctest::Approx(std::max(0.005, 5.0 * cmp.rows[0].coupling_ratio)));
    }

    TEST_CASE("oracle comparison outside the perturbative regime fails")
    {
        Bench b;
        b.pot.fundamentals[0].U[0] = -0.5 * bogoliubov_dispersion(0.5 * b.pot.fundamentals[0].k_c, b.p.mu_tilde,
                                                                   b.p.mass);
        BdgBandOptions opt;
        opt.q_points = 2;
        opt.doubling_check = false;
        const auto cmp = oracle_compare(perturbative_gaps(b.p, b.pot), solve_bdg_bands(b.p, b.pot, opt));
        CHECK_FALSE(cmp.rows[0].perturbative);
        CHECK_FALSE(cmp.all_pass());
    }

    TEST_CASE("oracle comparison rejects mismatched inputs")
    {
        const Bench b;
        BdgBandOptions opt;
        opt.q_points = 2;
        opt.doubling_check = false;
        const auto bands = solve_bdg_bands(b.p, b.pot, opt);
        auto pert = perturbative_gaps(b.p, b.pot);
        pert.mu_tilde *= 1.01;
        CHECK_THROWS_AS(oracle_compare(pert, bands), ContractError);
        pert = perturbative_gaps(b.p, b.pot);
        pert.entries[0].U_n *= 1.01;
        CHECK_THROWS_AS(oracle_compare(pert, bands), ContractError);
    }

    TEST_CASE("common grid for two fundamentals")
    {
        LateralPotential pot;
        pot.fundamentals = {HarmonicSeries{89e4, {1e-33}}, HarmonicSeries{88e4, {2e-33}}};
        const auto g = common_grid(pot);
        CHECK(g.k_base == doctest::Approx(1e4));
        CHECK(g.fundamental_multiple == std::vector<int>{89, 88});
        CHECK(recommended_cutoff(g, 16) == 143);

        pot.fundamentals[1].k_c = 89e4 / std::sqrt(2.0);
        CHECK_THROWS_AS(common_grid(pot), UnsupportedConfiguration);

        // harmonics landing on the same multiple are merged
        pot.fundamentals = {HarmonicSeries{2e6, {1e-33}}, HarmonicSeries{1e6, {0.0, 3e-33}}};
        const auto merged = common_grid(pot);
        REQUIRE(merged.harmonics.size() == 1);
        CHECK(merged.harmonics[0].U == doctest::Approx(4e-33));
    }

    TEST_CASE("invalid problems")
    {
        const Bench b;
        CHECK_THROWS_AS(solve_bdg(make_bdg_problem(b.p, b.pot, 0.0, 2)), DomainError);
        LateralPotential strong = b.pot;
        strong.fundamentals[0].U[0] = -2.0 * b.p.mu_tilde;
        CHECK_THROWS_AS(solve_bdg(make_bdg_problem(b.p, strong, 0.0, 8)), DomainError);
        const auto prob = make_bdg_problem(b.p, b.pot, 0.0, 8);
        CHECK_THROWS_AS(zone_edge_splitting(prob, 0.3 * b.pot.fundamentals[0].k_c), ContractError);
        CHECK_THROWS_AS(zone_edge_splitting(prob, 4.5 * b.pot.fundamentals[0].k_c), DomainError);
    }
}
