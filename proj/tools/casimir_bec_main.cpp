// casimir-bec: command-line driver.
//
//   casimir-bec <potential|spectrum|bdg|dsf|bragg> --config <file> --out <dir>
//   casimir-bec validate [--out <dir>]
//
// Exit codes: 0 success, 1 validation failure or runtime error, 2 configuration error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "casimir_bec/errors.hpp"
#include "casimir_bec/scenario.hpp"
#include "casimir_bec/validation.hpp"

namespace cb = casimir_bec;

namespace {

int run_validate(const std::string& out_dir)
{
    const auto table = cb::validate_paper();
    std::printf("%-42s %-5s %12s %12s %12s %12s  %s\n", "quantity", "unit", "reference", "computed", "deviation",
                "tolerance", "result");
    for (const auto& r : table.rows)
        std::printf("%-42s %-5s %12.5g %12.5g %12.4g %12.4g  %s (%s)\n", r.quantity.c_str(), r.unit.c_str(),
                    r.reference, r.computed, r.deviation, r.tolerance, r.pass ? "PASS" : "FAIL",
                    cb::tolerance_kind_name(r.kind).c_str());
    std::printf("wall time %.2f s\n", table.wall_seconds);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        cb::write_validation_csv(table, std::filesystem::path(out_dir) / "validation.csv");
    }
    return table.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Casimir-Polder lateral potential and Bogoliubov spectroscopy of an elongated condensate"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string validate_out;
    std::vector<CLI::App*> runs;
    for (const char* name : {"potential", "spectrum", "bdg", "dsf", "bragg"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " pipeline");
        sub->add_option("--config,-c", config_path, "configuration file")->required();
        sub->add_option("--out,-o", out_dir, "output directory")->required();
        runs.push_back(sub);
    }
    auto* validate = app.add_subcommand("validate", "compare the built-in benchmarks against reference values");
    validate->add_option("--out,-o", validate_out, "directory for validation.csv");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed())
            return run_validate(validate_out);
        for (auto* sub : runs) {
            if (!sub->parsed())
                continue;
            const auto config = cb::parse_config(config_path);
            const auto summary = cb::run_scenario(config, cb::parse_command(sub->get_name()), out_dir);
            for (const auto& path : summary.manifest)
                std::cout << path.string() << '\n';
            return 0;
        }
    }
    catch (const cb::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
