#include "casimir_bec/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "casimir_bec/constants.hpp"
#include "casimir_bec/csv.hpp"
#include "casimir_bec/errors.hpp"

namespace casimir_bec {

void SurfaceConfig::validate() const
{
    if (!(z_cm > 0.0) || !std::isfinite(z_cm))
        throw DomainError("surface: z_cm must be positive");
    if (fundamentals.empty())
        throw DomainError("surface: at least one corrugation fundamental is required");
    for (const auto& f : fundamentals) {
        if (!(f.k_c > 0.0) || !std::isfinite(f.k_c))
            throw DomainError("surface: k_c must be positive");
        for (double h : f.h) {
            if (!(h >= 0.0) || !std::isfinite(h))
                throw DomainError("surface: corrugation amplitudes must be finite and >= 0");
        }
    }
    if (material.kind == MaterialKind::scalar_eta && !(material.eta_F >= 0.0 && material.eta_F <= 1.0))
        throw DomainError("surface: eta_F must lie in [0, 1]");
}

double SurfaceConfig::max_amplitude() const
{
    double out = 0.0;
    for (const auto& f : fundamentals)
        for (double h : f.h)
            out = std::max(out, h);
    return out;
}

std::vector<std::string> SurfaceConfig::validity_warnings() const
{
    std::vector<std::string> warnings;
    double h = max_amplitude();
    double shortest = z_cm;
    for (const auto& f : fundamentals)
        shortest = std::min(shortest, constants::two_pi / f.k_c);
    // first-order expansion in h; the benchmark itself sits at h / z_cm = 0.33
    if (h > 0.25 * shortest) {
        std::ostringstream msg;
        msg << "corrugation amplitude " << h << " m is not small against the shortest geometric length "
            << shortest << " m (ratio " << h / shortest << "); first-order lateral potential is marginal";
        warnings.push_back(msg.str());
    }
    return warnings;
}

double response_perfect(double k, double z, const AtomSpecies& species)
{
    if (!(z > 0.0))
        throw DomainError("response_perfect: z must be positive");
    if (!(k >= 0.0))
        throw DomainError("response_perfect: k must be non-negative");
    const double Z = k * z;
    const double prefactor = 3.0 * constants::hbar * constants::c * species.polarizability_over_eps0 /
                             (8.0 * constants::pi * constants::pi * std::pow(z, 5));
    const double poly = 1.0 + Z + 16.0 * Z * Z / 45.0 + Z * Z * Z / 45.0;
    return -prefactor * std::exp(-Z) * poly;
}

ResponseFunction perfect_reflector_response(const AtomSpecies& species)
{
    return ResponseFunction(ResponseProvenance::perfect_reflector,
                            [species](double k, double z) { return response_perfect(k, z, species); });
}

bool LateralPotential::all_zero() const
{
    for (const auto& f : fundamentals)
        for (double u : f.U)
            if (u != 0.0)
                return false;
    return true;
}

double LateralPotential::total_amplitude() const
{
    double sum = 0.0;
    for (const auto& f : fundamentals)
        for (double u : f.U)
            sum += std::abs(u);
    return sum;
}

LateralPotential lateral_coefficients(const SurfaceConfig& surface, const ResponseFunction& response)
{
    surface.validate();
    const bool tabulated = surface.material.kind == MaterialKind::tabulated;
    if (tabulated != (response.provenance() == ResponseProvenance::tabulated))
        throw ContractError("lateral_coefficients: response provenance does not match the surface material");
    const double factor = surface.material.kind == MaterialKind::scalar_eta ? surface.material.eta_F : 1.0;

    LateralPotential out;
    for (const auto& f : surface.fundamentals) {
        HarmonicSeries series{f.k_c, {}};
        for (std::size_t j = 0; j < f.h.size(); ++j) {
            const double k = static_cast<double>(j + 1) * f.k_c;
            series.U.push_back(f.h[j] == 0.0 ? 0.0 : factor * f.h[j] * response(k, surface.z_cm));
        }
        out.fundamentals.push_back(std::move(series));
    }
    return out;
}

LateralPotential lateral_coefficients(const SurfaceConfig& surface, const AtomSpecies& species)
{
    if (surface.material.kind == MaterialKind::tabulated)
        return lateral_coefficients(surface, load_tabulated_response(surface.material.table_path));
    return lateral_coefficients(surface, perfect_reflector_response(species));
}

double lateral_eval(const LateralPotential& potential, double x)
{
    double sum = 0.0;
    for (const auto& f : potential.fundamentals)
        for (std::size_t j = 0; j < f.U.size(); ++j)
            sum += f.U[j] * std::cos(static_cast<double>(j + 1) * f.k_c * x);
    return sum;
}

namespace {

bool strictly_increasing(const std::vector<double>& v)
{
    return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
}

} // namespace

TabulatedResponse::TabulatedResponse(std::vector<double> k, std::vector<double> z, std::vector<double> g)
    : k_(std::move(k)), z_(std::move(z)), g_(std::move(g))
{
    if (k_.size() < 2 || z_.size() < 2)
        throw DomainError("tabulated response: need at least two nodes along k and z");
    if (!strictly_increasing(k_) || !strictly_increasing(z_))
        throw DomainError("tabulated response: k and z axes must be strictly increasing");
    if (g_.size() != k_.size() * z_.size())
        throw DomainError("tabulated response: grid is not rectangular");
}

double TabulatedResponse::operator()(double k, double z) const
{
    if (!(k >= k_.front() && k <= k_.back() && z >= z_.front() && z <= z_.back())) {
        std::ostringstream msg;
        msg << "tabulated response queried at k = " << k << " rad/m, z = " << z << " m outside grid k in ["
            << k_.front() << ", " << k_.back() << "], z in [" << z_.front() << ", " << z_.back() << "]";
        throw ExtrapolationError(msg.str());
    }
    auto cell = [](const std::vector<double>& axis, double v) {
        auto it = std::upper_bound(axis.begin(), axis.end(), v);
        std::size_t i = static_cast<std::size_t>(std::distance(axis.begin(), it));
        return std::clamp<std::size_t>(i, 1, axis.size() - 1) - 1;
    };
    const std::size_t i = cell(k_, k);
    const std::size_t j = cell(z_, z);
    const double tk = (k - k_[i]) / (k_[i + 1] - k_[i]);
    const double tz = (z - z_[j]) / (z_[j + 1] - z_[j]);
    const std::size_t nz = z_.size();
    auto at = [&](std::size_t a, std::size_t b) { return g_[a * nz + b]; };
    return (1 - tk) * (1 - tz) * at(i, j) + tk * (1 - tz) * at(i + 1, j) + (1 - tk) * tz * at(i, j + 1) +
           tk * tz * at(i + 1, j + 1);
}

TabulatedResponse parse_tabulated_response(std::istream& in, const std::string& source_name)
{
    io::CsvTable table;
    try {
        table = io::parse_csv(in);
    }
    catch (const std::exception& e) {
        throw DomainError(source_name + ": " + e.what());
    }
    if (table.header != std::vector<std::string>{"k_radpm", "z_m", "g_Jpm"})
        throw DomainError(source_name + ": expected header k_radpm,z_m,g_Jpm");
    std::vector<double> ks, zs, gs;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        double k, z, g;
        try {
            k = table.number(r, "k_radpm");
            z = table.number(r, "z_m");
            g = table.number(r, "g_Jpm");
        }
        catch (const std::exception&) {
            throw DomainError(source_name + ": malformed row " + std::to_string(r + 1));
        }
        if (ks.empty() || ks.back() != k)
            ks.push_back(k);
        if (ks.size() == 1)
            zs.push_back(z);
        else if (z != zs[(gs.size()) % zs.size()])
            throw DomainError(source_name + ": z column does not repeat the first block (row " +
                              std::to_string(r + 1) + ")");
        gs.push_back(g);
    }
    return TabulatedResponse(std::move(ks), std::move(zs), std::move(gs));
}

ResponseFunction load_tabulated_response(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open tabulated response file " + path.string());
    auto table = std::make_shared<TabulatedResponse>(parse_tabulated_response(in, path.string()));
    return ResponseFunction(ResponseProvenance::tabulated,
                            [table](double k, double z) { return (*table)(k, z); });
}

} // namespace casimir_bec
