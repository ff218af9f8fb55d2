#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "casimir_bec/config.hpp"

namespace casimir_bec {

/// Built-in benchmark: Rb-87, N = 1e4, omega_r = 2 pi x 2.7 kHz,
/// omega_x = 2 pi x 0.83 Hz, lambda_c = 9.75 um, h = 1 um, z_cm = 3 um.
RunConfig benchmark_config();

/// Near-surface variant: z_cm = 0.7 um, lambda_c = 4 um, h = 50 nm, same trap.
RunConfig near_surface_config();

enum class ToleranceKind { relative, absolute, upper_bound, lower_bound, exact };

struct ValidationRow {
    std::string quantity;
    std::string unit;
    double reference = 0.0;
    double computed = 0.0;
    double deviation = 0.0;   ///< relative or absolute depending on kind
    double tolerance = 0.0;
    ToleranceKind kind = ToleranceKind::relative;
    bool pass = false;
};

struct ValidationTable {
    std::vector<ValidationRow> rows;
    double wall_seconds = 0.0;
    bool all_pass() const;
};

ValidationTable validate_paper();

void write_validation_csv(const ValidationTable& table, const std::filesystem::path& path);

std::string tolerance_kind_name(ToleranceKind kind);

} // namespace casimir_bec
