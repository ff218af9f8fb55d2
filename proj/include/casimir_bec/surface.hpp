#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "casimir_bec/species.hpp"

namespace casimir_bec {

/// One corrugation fundamental: h(x) = sum_j h_j cos(j k_c x).
struct Fundamental {
    double k_c = 0.0;           ///< rad/m
    std::vector<double> h;      ///< m, h[0] is h_1
};

enum class MaterialKind { perfect, scalar_eta, tabulated };

struct Material {
    MaterialKind kind = MaterialKind::perfect;
    double eta_F = 1.0;                 ///< used when kind == scalar_eta
    std::filesystem::path table_path;   ///< used when kind == tabulated
};

struct SurfaceConfig {
    std::vector<Fundamental> fundamentals;
    double z_cm = 0.0;  ///< m, condensate-to-surface separation
    Material material;

    /// Hard invariants; throws DomainError.
    void validate() const;

    /// Soft first-order validity: the corrugation amplitude should be the
    /// smallest length. Returns human-readable warnings (may be empty).
    std::vector<std::string> validity_warnings() const;

    double max_amplitude() const;
};

enum class ResponseProvenance { perfect_reflector, tabulated };

/// g(k, z) in J/m: lateral potential amplitude per unit corrugation amplitude.
class ResponseFunction {
public:
    using Evaluator = std::function<double(double k, double z)>;

    ResponseFunction(ResponseProvenance provenance, Evaluator evaluator)
        : provenance_(provenance), evaluator_(std::move(evaluator))
    {
    }

    double operator()(double k, double z) const { return evaluator_(k, z); }
    ResponseProvenance provenance() const { return provenance_; }

private:
    ResponseProvenance provenance_;
    Evaluator evaluator_;
};

/// Retarded perfect-reflector response
///   g = -(3 hbar c alpha(0) / (8 pi^2 eps0 z^5)) e^{-Z} (1 + Z + 16 Z^2/45 + Z^3/45),  Z = k z.
/// Valid for z >> transition wavelength; that is the caller's check.
double response_perfect(double k, double z, const AtomSpecies& species);

ResponseFunction perfect_reflector_response(const AtomSpecies& species);

/// Coefficients of the lateral potential of one fundamental:
/// U_L(x) contribution = sum_n U[n-1] cos(n k_c x).
struct HarmonicSeries {
    double k_c = 0.0;
    std::vector<double> U; ///< J
};

struct LateralPotential {
    std::vector<HarmonicSeries> fundamentals;
    double U_N = 0.0; ///< J, x-independent normal part at z_cm

    bool all_zero() const;
    /// sum of |U_n| over every harmonic of every fundamental; bounds |U_L(x)|.
    double total_amplitude() const;
};

/// U_n = factor * h_n * g(n k_c, z_cm), factor = eta_F for a scalar_eta material,
/// 1 otherwise. The sign of g is kept (attractive surface -> negative U_n).
LateralPotential lateral_coefficients(const SurfaceConfig& surface, const ResponseFunction& response);

/// Convenience overload using the perfect-reflector response of `species`.
LateralPotential lateral_coefficients(const SurfaceConfig& surface, const AtomSpecies& species);

/// U_L(x) = sum over fundamentals and harmonics of U_n cos(n k_c x).
double lateral_eval(const LateralPotential& potential, double x);

/// g(k, z) sampled on a rectangular (k, z) grid, bilinearly interpolated.
class TabulatedResponse {
public:
    TabulatedResponse(std::vector<double> k, std::vector<double> z, std::vector<double> g);

    /// Throws ExtrapolationError outside the grid.
    double operator()(double k, double z) const;

    const std::vector<double>& k_axis() const { return k_; }
    const std::vector<double>& z_axis() const { return z_; }

private:
    std::vector<double> k_;
    std::vector<double> z_;
    std::vector<double> g_; // k-major: g_[i * z_.size() + j]
};

/// CSV with header `k_radpm,z_m,g_Jpm`, one row per grid node, k outer and z
/// inner, both strictly increasing. `#` lines are comments.
TabulatedResponse parse_tabulated_response(std::istream& in, const std::string& source_name = "<stream>");
ResponseFunction load_tabulated_response(const std::filesystem::path& path);

} // namespace casimir_bec
