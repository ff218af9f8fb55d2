#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "casimir_bec/condensate.hpp"
#include "casimir_bec/spectrum.hpp"
#include "casimir_bec/surface.hpp"

namespace casimir_bec {

/// Harmonic of the periodic potential on the common plane-wave grid:
/// -U cos(multiple * k_base * x) enters A(x) = mu_tilde - U_L(x).
struct GridHarmonic {
    int multiple = 0;
    double U = 0.0;
};

/// 1D BdG problem with Thomas-Fermi background mu_tilde - U_L(x), in the Bloch
/// basis exp(i (q_b + n k_base) x), n = -M..M.
struct BdgProblem {
    double mu_tilde = 0.0;
    double mass = 0.0;
    double k_base = 0.0;
    std::vector<GridHarmonic> harmonics;
    double q_b = 0.0;
    int M = 16;

    int basis_size() const { return 2 * M + 1; }
    int dimension() const { return 2 * basis_size(); }
    double momentum(int index) const { return q_b + (index - M) * k_base; }
    /// Throws DomainError if M < 4 or mu_tilde <= sum |U|.
    void validate() const;
};

/// Largest numerator / denominator accepted for k_c1 / k_c2.
inline constexpr int max_commensurate_order = 256;

/// Common grid wavenumber for the fundamentals of `potential` and the mapping
/// of every harmonic onto it. One fundamental: k_base = k_c. Two: k_c1/k_c2
/// must equal p/r with p, r <= max_commensurate_order (UnsupportedConfiguration
/// otherwise); k_base = k_c1 / p.
struct CommonGrid {
    double k_base = 0.0;
    std::vector<int> fundamental_multiple; ///< k_c_i = multiple * k_base
    std::vector<GridHarmonic> harmonics;
};
CommonGrid common_grid(const LateralPotential& potential);

/// Cutoff large enough to hold every fundamental's zone edge plus margin:
/// max(base_cutoff, ceil(1.6 * largest fundamental multiple)).
int recommended_cutoff(const CommonGrid& grid, int base_cutoff);

BdgProblem make_bdg_problem(const Quasi1DParams& params, const LateralPotential& potential, double q_b, int M);

/// Block matrix [[T + A, A], [-A, -(T + A)]] acting on (u, v*), in joules.
Eigen::MatrixXd build_bdg(const BdgProblem& problem);

struct BdgSpectrum {
    std::vector<double> positive;          ///< J, ascending, basis_size() values
    std::vector<std::complex<double>> all; ///< J, raw eigenvalues
    Eigen::MatrixXcd eigenvectors;         ///< columns aligned with `positive` (empty if not requested)
    double max_imaginary = 0.0;            ///< J, largest |Im E| outside the zero-mode window
};

/// Dense non-symmetric diagonalisation. |Im E| < 1e-8 mu_tilde is truncated;
/// larger imaginary parts throw InstabilityError. Eigenvalues below 1e-6 mu_tilde
/// in modulus are treated as the (possibly defective) Goldstone pair.
BdgSpectrum solve_bdg(const BdgProblem& problem, bool with_eigenvectors = false);

/// Splitting of the two positive eigenvalues whose modes carry the largest
/// weight on the plane waves +-Q (Q a half-integer multiple of k_base). The
/// problem's q_b is replaced by Q.
struct EdgeSplitting {
    double lower = 0.0;
    double upper = 0.0;
    double gap() const { return upper - lower; }
};
EdgeSplitting zone_edge_splitting(BdgProblem problem, double Q);

struct BdgGap {
    std::size_t fundamental = 0;
    int n = 0;
    double k_c = 0.0;
    double U_n = 0.0;
    double q_n = 0.0;
    double E_B = 0.0;      ///< J, unperturbed E_B(q_n)
    double gap = 0.0;      ///< J at cutoff M
    double gap_ref = 0.0;  ///< J at cutoff M - 2
    double drift() const;  ///< |gap - gap_ref| / gap (0 when both vanish)
};

struct BdgBands {
    double mu_tilde = 0.0;
    double k_base = 0.0;
    int M = 0;
    std::vector<double> q_b;                 ///< rad/m
    std::vector<std::vector<double>> bands;  ///< bands[i][b], J, lowest `band_count`
    std::vector<BdgGap> gaps;
    bool converged = false;  ///< raising M to min(2M, M + 32) moved every gap by < 0.1%
    double doubling_drift = 0.0;
};

struct BdgBandOptions {
    int M = 16;
    std::size_t q_points = 65;     ///< over [-k_base/2, k_base/2]
    std::size_t band_count = 8;
    int max_harmonic = 1;          ///< zone-edge gaps reported for n = 1..max_harmonic
    bool doubling_check = true;
};

BdgBands solve_bdg_bands(const Quasi1DParams& params, const LateralPotential& potential,
                         const BdgBandOptions& options = {});

struct OracleRow {
    std::size_t fundamental = 0;
    int n = 0;
    double gap_perturbative = 0.0;  ///< J
    double gap_numeric = 0.0;       ///< J
    double coupling_ratio = 0.0;    ///< |U_n| / E_B(q_n)
    double relative_deviation = 0.0;
    double tolerance = 0.0;         ///< max(0.5%, 5 |U_n| / E_B)
    bool within_tolerance = false;
    bool perturbative = false;      ///< coupling_ratio <= 0.1
    bool pass = false;
};

struct OracleComparison {
    std::vector<OracleRow> rows;
    bool all_pass() const;
};

/// Per-gap comparison; throws ContractError when the two inputs were not
/// computed for the same mu_tilde and coefficients.
OracleComparison oracle_compare(const GapReport& perturbative, const BdgBands& numeric);

} // namespace casimir_bec
