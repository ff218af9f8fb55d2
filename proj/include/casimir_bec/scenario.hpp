#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "casimir_bec/config.hpp"

namespace casimir_bec {

enum class Command { potential, spectrum, bdg, dsf, bragg };

Command parse_command(const std::string& name);
std::string command_name(Command command);

struct RunSummary {
    nlohmann::json document;                     ///< written as run_summary.json
    std::vector<std::filesystem::path> manifest; ///< emitted files, summary last
};

/// Runs one module pipeline and writes its CSV tables plus run_summary.json
/// into `out_dir`. Output is a pure function of the config.
RunSummary run_scenario(const RunConfig& config, Command command, const std::filesystem::path& out_dir);

} // namespace casimir_bec
