#include "casimir_bec/bdg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "casimir_bec/errors.hpp"
#include "casimir_bec/units.hpp"

namespace casimir_bec {

void BdgProblem::validate() const
{
    if (M < 4)
        throw DomainError("BdG: plane-wave cutoff M must be >= 4");
    if (!(k_base > 0.0) || !(mass > 0.0))
        throw DomainError("BdG: k_base and mass must be positive");
    double sum = 0.0;
    for (const auto& h : harmonics) {
        if (h.multiple < 1)
            throw DomainError("BdG: harmonic multiples must be >= 1");
        sum += std::abs(h.U);
    }
    if (!(mu_tilde > sum))
        throw DomainError("BdG: Thomas-Fermi background unstable, mu_tilde must exceed sum |U_n|");
}

namespace {

// Best rational approximation p/r of x with p, r <= limit (continued fractions).
std::pair<long, long> rational(double x, long limit)
{
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_f = std::floor(v);
        const long a = static_cast<long>(a_f);
        const long p2 = a * p1 + p0;
        const long q2 = a * q1 + q0;
        if (p2 > limit || q2 > limit)
            break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= 1e-12 * x)
            break;
        const double frac = v - a_f;
        if (frac < 1e-15)
            break;
        v = 1.0 / frac;
    }
    return {p1, q1};
}

} // namespace

CommonGrid common_grid(const LateralPotential& potential)
{
    const auto& fs = potential.fundamentals;
    if (fs.empty() || fs.size() > 2)
        throw UnsupportedConfiguration("BdG: one or two corrugation fundamentals are supported");
    CommonGrid grid;
    if (fs.size() == 1) {
        grid.k_base = fs[0].k_c;
        grid.fundamental_multiple = {1};
    }
    else {
        const double ratio = fs[0].k_c / fs[1].k_c;
        const auto [p, r] = rational(ratio, max_commensurate_order);
        if (r == 0 || std::abs(static_cast<double>(p) / static_cast<double>(r) - ratio) > 1e-9 * ratio) {
            std::ostringstream msg;
            msg << "BdG: k_c1 / k_c2 = " << ratio << " is not a ratio p/r with p, r <= " << max_commensurate_order
                << "; no common Bloch period";
            throw UnsupportedConfiguration(msg.str());
        }
        grid.k_base = fs[0].k_c / static_cast<double>(p);
        grid.fundamental_multiple = {static_cast<int>(p), static_cast<int>(r)};
    }
    std::map<int, double> merged;
    for (std::size_t f = 0; f < fs.size(); ++f)
        for (std::size_t j = 0; j < fs[f].U.size(); ++j)
            if (fs[f].U[j] != 0.0)
                merged[static_cast<int>(j + 1) * grid.fundamental_multiple[f]] += fs[f].U[j];
    for (const auto& [multiple, U] : merged)
        grid.harmonics.push_back({multiple, U});
    return grid;
}

int recommended_cutoff(const CommonGrid& grid, int base_cutoff)
{
    int largest = 1;
    for (int m : grid.fundamental_multiple)
        largest = std::max(largest, m);
    return std::max(base_cutoff, static_cast<int>(std::ceil(1.6 * largest)));
}

BdgProblem make_bdg_problem(const Quasi1DParams& params, const LateralPotential& potential, double q_b, int M)
{
    const auto grid = common_grid(potential);
    BdgProblem problem;
    problem.mu_tilde = params.mu_tilde;
    problem.mass = params.mass;
    problem.k_base = grid.k_base;
    problem.harmonics = grid.harmonics;
    problem.q_b = q_b;
    problem.M = M;
    return problem;
}

Eigen::MatrixXd build_bdg(const BdgProblem& problem)
{
    problem.validate();
    const int D = problem.basis_size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(D, D) * problem.mu_tilde;
    for (const auto& h : problem.harmonics) {
        for (int i = 0; i + h.multiple < D; ++i) {
            A(i, i + h.multiple) -= 0.5 * h.U;
            A(i + h.multiple, i) -= 0.5 * h.U;
        }
    }
    Eigen::MatrixXd S = A;
    for (int i = 0; i < D; ++i)
        S(i, i) += kinetic_energy(problem.momentum(i), problem.mass);

    Eigen::MatrixXd H(2 * D, 2 * D);
    H.topLeftCorner(D, D) = S;
    H.topRightCorner(D, D) = A;
    H.bottomLeftCorner(D, D) = -A;
    H.bottomRightCorner(D, D) = -S;
    return H;
}

BdgSpectrum solve_bdg(const BdgProblem& problem, bool with_eigenvectors)
{
    const double scale = problem.mu_tilde;
    const Eigen::MatrixXd H = build_bdg(problem) / scale;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(H, with_eigenvectors);
    if (solver.info() != Eigen::Success)
        throw InternalError("BdG: eigensolver did not converge");

    constexpr double imaginary_floor = 1e-8;
    constexpr double zero_mode_window = 1e-6;
    const auto& raw = solver.eigenvalues();
    const auto n = raw.size();

    BdgSpectrum out;
    std::vector<double> real(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> z = raw(i);
        out.all.push_back(z * scale);
        if (std::abs(z) < zero_mode_window) {
            real[static_cast<std::size_t>(i)] = 0.0;
            continue;
        }
        out.max_imaginary = std::max(out.max_imaginary, std::abs(z.imag()) * scale);
        if (std::abs(z.imag()) >= imaginary_floor) {
            std::ostringstream msg;
            msg << "BdG: complex eigenvalue " << units::energy_to_frequency(z.real() * scale) << " + "
                << units::energy_to_frequency(z.imag() * scale)
                << "i Hz; background is dynamically unstable or the potential is too strong";
            throw InstabilityError(msg.str());
        }
        real[static_cast<std::size_t>(i)] = z.real();
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return real[static_cast<std::size_t>(a)] < real[static_cast<std::size_t>(b)];
    });
    const Eigen::Index half = n / 2;
    if (with_eigenvectors)
        out.eigenvectors.resize(n, half);
    for (Eigen::Index k = 0; k < half; ++k) {
        const Eigen::Index idx = order[static_cast<std::size_t>(half + k)];
        out.positive.push_back(real[static_cast<std::size_t>(idx)] * scale);
        if (with_eigenvectors)
            out.eigenvectors.col(k) = solver.eigenvectors().col(idx);
    }
    return out;
}

EdgeSplitting zone_edge_splitting(BdgProblem problem, double Q)
{
    problem.q_b = Q;
    const double steps = 2.0 * Q / problem.k_base;
    const long shift = std::lround(steps);
    if (std::abs(steps - static_cast<double>(shift)) > 1e-9 * std::max(1.0, std::abs(steps)))
        throw ContractError("zone_edge_splitting: 2Q is not a multiple of the grid wavenumber");
    if (std::abs(shift) > problem.M)
        throw DomainError("zone_edge_splitting: cutoff M too small to hold -Q");

    const auto spectrum = solve_bdg(problem, true);
    const int D = problem.basis_size();
    const int a = problem.M;                          // +Q
    const int b = problem.M - static_cast<int>(shift); // -Q
    const auto cols = spectrum.eigenvectors.cols();

    std::vector<double> weight(static_cast<std::size_t>(cols));
    for (Eigen::Index c = 0; c < cols; ++c) {
        const auto v = spectrum.eigenvectors.col(c);
        double w = std::norm(v(a)) + std::norm(v(D + a));
        if (b != a)
            w += std::norm(v(b)) + std::norm(v(D + b));
        weight[static_cast<std::size_t>(c)] = w / v.squaredNorm();
    }
    std::vector<std::size_t> order(weight.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return weight[x] > weight[y]; });
    const double e0 = spectrum.positive[order[0]];
    const double e1 = spectrum.positive[order[1]];
    return {std::min(e0, e1), std::max(e0, e1)};
}

namespace {

double relative_change(double value, double reference, double scale)
{
    const double floor = 1e-12 * scale;
    if (std::abs(value) < floor && std::abs(reference) < floor)
        return 0.0;
    return std::abs(value - reference) / std::max(std::abs(value), floor);
}

} // namespace

double BdgGap::drift() const
{
    return relative_change(gap, gap_ref, E_B);
}

BdgBands solve_bdg_bands(const Quasi1DParams& params, const LateralPotential& potential, const BdgBandOptions& options)
{
    if (options.q_points < 2)
        throw DomainError("solve_bdg_bands: need at least two Bloch momenta");
    const auto grid = common_grid(potential);
    BdgBands out;
    out.mu_tilde = params.mu_tilde;
    out.k_base = grid.k_base;
    out.M = options.M;

    BdgProblem base = make_bdg_problem(params, potential, 0.0, options.M);
    for (std::size_t i = 0; i < options.q_points; ++i) {
        const double q_b = grid.k_base * (-0.5 + static_cast<double>(i) / static_cast<double>(options.q_points - 1));
        base.q_b = q_b;
        const auto spectrum = solve_bdg(base);
        const std::size_t count = std::min(options.band_count, spectrum.positive.size());
        out.q_b.push_back(q_b);
        out.bands.emplace_back(spectrum.positive.begin(), spectrum.positive.begin() + static_cast<long>(count));
    }

    BdgProblem reduced = base;
    reduced.M = options.M - 2;
    BdgProblem doubled = base;
    doubled.M = std::min(2 * options.M, options.M + 32);
    out.converged = true;
    for (std::size_t f = 0; f < potential.fundamentals.size(); ++f) {
        const auto& series = potential.fundamentals[f];
        for (int n = 1; n <= options.max_harmonic; ++n) {
            BdgGap g;
            g.fundamental = f;
            g.n = n;
            g.k_c = series.k_c;
            g.U_n = static_cast<std::size_t>(n) <= series.U.size() ? series.U[static_cast<std::size_t>(n - 1)] : 0.0;
            g.q_n = 0.5 * n * series.k_c;
            g.E_B = bogoliubov_dispersion(g.q_n, params.mu_tilde, params.mass);
            g.gap = zone_edge_splitting(base, g.q_n).gap();
            g.gap_ref = zone_edge_splitting(reduced, g.q_n).gap();
            if (options.doubling_check) {
                const double twice = zone_edge_splitting(doubled, g.q_n).gap();
                const double change = relative_change(twice, g.gap, g.E_B);
                out.doubling_drift = std::max(out.doubling_drift, change);
                // gaps at the eigensolver noise floor carry no convergence information
                if (change >= 1e-3 && std::abs(g.gap) > 1e-10 * g.E_B)
                    out.converged = false;
            }
            out.gaps.push_back(g);
        }
    }
    if (!options.doubling_check)
        out.converged = false;
    return out;
}

bool OracleComparison::all_pass() const
{
    return std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) { return r.pass; });
}

OracleComparison oracle_compare(const GapReport& perturbative, const BdgBands& numeric)
{
    if (std::abs(perturbative.mu_tilde - numeric.mu_tilde) > 1e-9 * numeric.mu_tilde)
        throw ContractError("oracle_compare: inputs were computed for different mu_tilde");
    OracleComparison out;
    for (const auto& g : numeric.gaps) {
        const GapEntry* entry = perturbative.find(g.fundamental, g.n);
        if (entry) {
            if (std::abs(entry->U_n - g.U_n) > 1e-9 * std::abs(g.U_n) ||
                std::abs(entry->k_c - g.k_c) > 1e-9 * g.k_c)
                throw ContractError("oracle_compare: potential coefficients differ between inputs");
        }
        else if (g.U_n != 0.0) {
            throw ContractError("oracle_compare: perturbative report lacks a nonzero coefficient");
        }
        OracleRow row;
        row.fundamental = g.fundamental;
        row.n = g.n;
        row.gap_perturbative = entry ? entry->gap : 0.0;
        row.gap_numeric = g.gap;
        row.coupling_ratio = std::abs(g.U_n) / g.E_B;
        if (row.gap_perturbative != 0.0)
            row.relative_deviation = std::abs(row.gap_numeric - row.gap_perturbative) / row.gap_perturbative;
        else
            row.relative_deviation = std::abs(row.gap_numeric) < 1e-10 * g.E_B ? 0.0 : INFINITY;
        row.tolerance = std::max(0.005, 5.0 * row.coupling_ratio);
        row.within_tolerance = row.relative_deviation <= row.tolerance;
        row.perturbative = row.coupling_ratio <= 0.1;
        row.pass = row.within_tolerance && row.perturbative;
        out.rows.push_back(row);
    }
    return out;
}

} // namespace casimir_bec
