#include "casimir_bec/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "casimir_bec/bdg.hpp"
#include "casimir_bec/bragg.hpp"
#include "casimir_bec/constants.hpp"
#include "casimir_bec/csv.hpp"
#include "casimir_bec/errors.hpp"
#include "casimir_bec/spectrum.hpp"
#include "casimir_bec/units.hpp"

namespace casimir_bec {

using constants::hbar;
using nlohmann::json;
using units::energy_to_frequency;
using units::to_micrometers;

Command parse_command(const std::string& name)
{
    if (name == "potential") return Command::potential;
    if (name == "spectrum") return Command::spectrum;
    if (name == "bdg") return Command::bdg;
    if (name == "dsf") return Command::dsf;
    if (name == "bragg") return Command::bragg;
    throw ConfigError("unknown command '" + name + "' (expected potential, spectrum, bdg, dsf, bragg)");
}

std::string command_name(Command command)
{
    switch (command) {
    case Command::potential: return "potential";
    case Command::spectrum: return "spectrum";
    case Command::bdg: return "bdg";
    case Command::dsf: return "dsf";
    case Command::bragg: return "bragg";
    }
    return "?";
}

namespace {

const char* material_name(MaterialKind kind)
{
    switch (kind) {
    case MaterialKind::perfect: return "perfect";
    case MaterialKind::scalar_eta: return "eta";
    case MaterialKind::tabulated: return "tabulated";
    }
    return "?";
}

std::string num(double v)
{
    return io::format_number(v);
}

struct Context {
    const RunConfig& config;
    std::filesystem::path out_dir;
    Quasi1DParams params;
    LateralPotential potential;
    GapReport gaps;
    json doc;
    std::vector<std::filesystem::path> manifest;

    io::CsvWriter table(const std::string& name, const std::vector<std::string>& comments,
                        const std::vector<std::string>& header)
    {
        manifest.push_back(out_dir / name);
        std::vector<std::string> all{"command: " + doc["command"].get<std::string>()};
        all.insert(all.end(), comments.begin(), comments.end());
        return io::CsvWriter(out_dir / name, all, header);
    }
};

json inputs_json(const RunConfig& c)
{
    json species{{"name", c.species.name},
                 {"mass_kg", c.species.mass},
                 {"scattering_length_m", c.species.scattering_length},
                 {"polarizability_m3", c.species.polarizability_over_eps0},
                 {"transition_wavelength_m", c.species.transition_wavelength}};
    json trap{{"omega_r_Hz", c.trap.omega_r / constants::two_pi},
              {"omega_x_Hz", c.trap.omega_x / constants::two_pi},
              {"N", c.trap.N},
              {"U_N_Hz", energy_to_frequency(c.trap.U_N_offset)},
              {"T_bec_K", c.T_bec}};
    json fundamentals = json::array();
    for (const auto& f : c.surface.fundamentals) {
        json h = json::array();
        for (double v : f.h)
            h.push_back(to_micrometers(v));
        fundamentals.push_back({{"lambda_c_um", to_micrometers(constants::two_pi / f.k_c)}, {"h_um", h}});
    }
    json surface{{"fundamentals", fundamentals},
                 {"z_cm_um", to_micrometers(c.surface.z_cm)},
                 {"material", material_name(c.surface.material.kind)},
                 {"T_env_K", c.T_env}};
    if (c.surface.material.kind == MaterialKind::scalar_eta)
        surface["eta_F"] = c.surface.material.eta_F;
    if (c.surface.material.kind == MaterialKind::tabulated)
        surface["response_file"] = c.surface.material.table_path.filename().string();
    return {{"species", species}, {"trap", trap}, {"surface", surface}};
}

json params_json(const Quasi1DParams& p)
{
    return {{"sigma_um", to_micrometers(p.sigma)},
            {"g_eff_Jm", p.g_eff},
            {"mu_tilde_Hz", energy_to_frequency(p.mu_tilde)},
            {"mu_Hz", energy_to_frequency(p.mu)},
            {"half_length_um", to_micrometers(p.half_length)},
            {"k_mu_radpm", p.k_mu},
            {"peak_density_perm", p.peak_density()},
            {"radial_frozen", p.radial_frozen},
            {"elongated", p.elongated}};
}

json potential_json(const LateralPotential& potential)
{
    json fundamentals = json::array();
    for (const auto& f : potential.fundamentals) {
        json U = json::array();
        for (double v : f.U)
            U.push_back(energy_to_frequency(v));
        fundamentals.push_back({{"k_c_radpm", f.k_c}, {"U_Hz", U}});
    }
    return {{"U_N_Hz", energy_to_frequency(potential.U_N)}, {"fundamentals", fundamentals}};
}

json gaps_json(const GapReport& report)
{
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"fundamental", e.fundamental + 1},
                           {"n", e.n},
                           {"q_n_radpm", e.q_n},
                           {"U_n_Hz", energy_to_frequency(e.U_n)},
                           {"F", e.F},
                           {"E_B_Hz", energy_to_frequency(e.E_B)},
                           {"gap_Hz", energy_to_frequency(e.gap)},
                           {"coupling_ratio", e.coupling_ratio()}});
    return {{"mu_tilde_Hz", energy_to_frequency(report.mu_tilde)}, {"entries", entries},
            {"warnings", report.warnings}};
}

json regime_json(const RegimeReport& report)
{
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"condition", c.condition},
                          {"pass", c.pass},
                          {"note", c.note}});
    return {{"all_pass", report.all_pass()}, {"checks", checks}};
}

json oracle_json(const OracleComparison& cmp)
{
    json rows = json::array();
    for (const auto& r : cmp.rows)
        rows.push_back({{"fundamental", r.fundamental + 1},
                        {"n", r.n},
                        {"gap_perturbative_Hz", energy_to_frequency(r.gap_perturbative)},
                        {"gap_bdg_Hz", energy_to_frequency(r.gap_numeric)},
                        {"coupling_ratio", r.coupling_ratio},
                        {"relative_deviation", r.relative_deviation},
                        {"tolerance", r.tolerance},
                        {"perturbative", r.perturbative},
                        {"pass", r.pass}});
    return {{"all_pass", cmp.all_pass()}, {"rows", rows}};
}

void run_potential(Context& ctx)
{
    auto& c = ctx.config;
    {
        auto csv = ctx.table("lateral_potential.csv",
                             {"U_n = h_n g(n k_c, z_cm); energies also as E / (2 pi hbar)",
                              "z_cm_um = " + num(to_micrometers(c.surface.z_cm)),
                              "material = " + std::string(material_name(c.surface.material.kind))},
                             {"fundamental", "n", "k_c_radpm", "lambda_c_um", "h_n_um", "Z", "U_n_J", "U_n_Hz"});
        for (std::size_t f = 0; f < ctx.potential.fundamentals.size(); ++f) {
            const auto& series = ctx.potential.fundamentals[f];
            const auto& fund = c.surface.fundamentals[f];
            for (std::size_t j = 0; j < series.U.size(); ++j) {
                const int n = static_cast<int>(j + 1);
                csv.row({std::to_string(f + 1), std::to_string(n), num(series.k_c),
                         num(to_micrometers(constants::two_pi / series.k_c)), num(to_micrometers(fund.h[j])),
                         num(n * series.k_c * c.surface.z_cm), num(series.U[j]),
                         num(energy_to_frequency(series.U[j]))});
            }
        }
    }
    double period = 0.0;
    for (const auto& f : ctx.potential.fundamentals)
        period = std::max(period, constants::two_pi / f.k_c);
    auto csv = ctx.table("lateral_profile.csv", {"U_L(x) over two periods of the longest fundamental"},
                         {"x_um", "U_L_Hz"});
    const auto xs = linspace(-period, period, 1001);
    for (double x : xs)
        csv.row(std::vector<double>{to_micrometers(x), energy_to_frequency(lateral_eval(ctx.potential, x))});
    ctx.doc["results"] = {{"profile_points", xs.size()}};
}

std::optional<BdgBands> read_bdg_gaps(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path))
        return std::nullopt;
    const auto table = io::read_csv(path);
    BdgBands bands;
    for (const auto& comment : table.comments) {
        const std::string key = "mu_tilde_Hz = ";
        if (comment.rfind(key, 0) == 0)
            bands.mu_tilde = units::frequency_to_energy(std::stod(comment.substr(key.size())));
    }
    if (bands.mu_tilde == 0.0)
        throw ContractError(path.string() + ": missing mu_tilde_Hz comment");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        BdgGap g;
        g.fundamental = static_cast<std::size_t>(table.number(i, "fundamental")) - 1;
        g.n = static_cast<int>(table.number(i, "n"));
        g.k_c = table.number(i, "k_c_radpm");
        g.q_n = table.number(i, "q_n_radpm");
        g.U_n = units::frequency_to_energy(table.number(i, "U_n_Hz"));
        g.E_B = units::frequency_to_energy(table.number(i, "E_B_Hz"));
        g.gap = units::frequency_to_energy(table.number(i, "gap_Hz"));
        g.gap_ref = units::frequency_to_energy(table.number(i, "gap_ref_Hz"));
        bands.gaps.push_back(g);
    }
    return bands;
}

void run_spectrum(Context& ctx)
{
    auto& c = ctx.config;
    {
        auto csv = ctx.table("gaps.csv", {"first-order zone-edge gaps, Delta E_n = |U_n| F(n k_c / 2)",
                                          "mu_tilde_Hz = " + num(energy_to_frequency(ctx.params.mu_tilde))},
                             {"fundamental", "n", "k_c_radpm", "q_n_radpm", "U_n_Hz", "F", "E_B_Hz", "gap_Hz",
                              "coupling_ratio"});
        for (const auto& e : ctx.gaps.entries)
            csv.row({std::to_string(e.fundamental + 1), std::to_string(e.n), num(e.k_c), num(e.q_n),
                     num(energy_to_frequency(e.U_n)), num(e.F), num(energy_to_frequency(e.E_B)),
                     num(energy_to_frequency(e.gap)), num(e.coupling_ratio())});
    }
    {
        auto csv = ctx.table("branches.csv", {"two-branch spectrum near q_n, eps = q - q_n"},
                             {"fundamental", "n", "eps_radpm", "q_radpm", "E_minus_Hz", "E_plus_Hz", "E_B_Hz"});
        const std::size_t points = std::max<std::size_t>(c.numerics.branch_points, 2);
        for (const auto& e : ctx.gaps.entries) {
            const auto eps = linspace(-0.25 * e.k_c, 0.25 * e.k_c, points);
            const auto slice = band_branches(ctx.params, e.k_c, e.U_n, e.n, eps);
            for (std::size_t i = 0; i < eps.size(); ++i)
                csv.row({std::to_string(e.fundamental + 1), std::to_string(e.n), num(eps[i]), num(e.q_n + eps[i]),
                         num(energy_to_frequency(slice.E_minus[i])), num(energy_to_frequency(slice.E_plus[i])),
                         num(energy_to_frequency(slice.E_B[i]))});
        }
    }
    json results;
    if (ctx.potential.fundamentals.size() == 2) {
        try {
            const auto coupled = coupled_mode_gaps(ctx.params, ctx.potential);
            auto csv = ctx.table("coupled.csv",
                                 {"coupled-mode splittings for two fundamentals",
                                  "delta_k_radpm = " + num(coupled.delta_k),
                                  "delta_k_min_radpm = " + num(coupled.delta_k_min)},
                                 {"fundamental", "k_c_radpm", "U_Hz", "splitting_Hz", "independent_gap_Hz",
                                  "relative_deviation", "cluster_size"});
            json rows = json::array();
            for (const auto& s : coupled.splittings) {
                csv.row({std::to_string(s.fundamental + 1), num(s.k_c), num(energy_to_frequency(s.U)),
                         num(energy_to_frequency(s.splitting)), num(energy_to_frequency(s.independent_gap)),
                         num(s.relative_deviation()), std::to_string(s.momenta.size())});
                rows.push_back({{"fundamental", s.fundamental + 1},
                                {"splitting_Hz", energy_to_frequency(s.splitting)},
                                {"independent_gap_Hz", energy_to_frequency(s.independent_gap)},
                                {"relative_deviation", s.relative_deviation()}});
            }
            results["coupled"] = {{"delta_k_radpm", coupled.delta_k},
                                  {"delta_k_min_radpm", coupled.delta_k_min},
                                  {"independent", coupled.independent},
                                  {"splittings", rows}};
        }
        catch (const UnsupportedConfiguration& ex) {
            results["coupled"] = {{"skipped", ex.what()}};
        }
    }
    {
        auto csv = ctx.table("regime.csv", {"physics-regime diagnostics"},
                             {"check", "value", "threshold", "condition", "pass"});
        const auto regime =
            regime_check(ctx.params, c.surface, ctx.potential, c.species, c.T_env, c.T_bec);
        for (const auto& ch : regime.checks)
            csv.row({ch.name, num(ch.value), num(ch.threshold), ch.condition, ch.pass ? "true" : "false"});
    }
    const auto bdg_path = ctx.out_dir / "bdg_gaps.csv";
    if (std::filesystem::exists(bdg_path)) {
        try {
            const auto numeric = read_bdg_gaps(bdg_path);
            results["oracle"] = oracle_json(oracle_compare(ctx.gaps, *numeric));
        }
        catch (const ContractError& ex) {
            results["oracle"] = {{"skipped", std::string("bdg_gaps.csv does not match this config: ") + ex.what()}};
        }
    }
    ctx.doc["results"] = results;
}

void run_bdg(Context& ctx)
{
    auto& c = ctx.config;
    const auto grid = common_grid(ctx.potential);
    BdgBandOptions options;
    options.M = recommended_cutoff(grid, c.numerics.bdg_cutoff);
    options.q_points = c.numerics.bdg_q_points;
    options.band_count = c.numerics.band_count;
    std::size_t harmonics = 1;
    for (const auto& f : ctx.potential.fundamentals)
        harmonics = std::max(harmonics, f.U.size());
    options.max_harmonic = c.numerics.max_harmonic.value_or(static_cast<int>(harmonics));
    const auto bands = solve_bdg_bands(ctx.params, ctx.potential, options);

    const std::vector<std::string> meta{"mu_tilde_Hz = " + num(energy_to_frequency(bands.mu_tilde)),
                                        "k_base_radpm = " + num(bands.k_base), "M = " + std::to_string(bands.M),
                                        std::string("converged = ") + (bands.converged ? "true" : "false"),
                                        "doubling_drift = " + num(bands.doubling_drift)};
    {
        std::vector<std::string> header{"q_b_radpm"};
        const std::size_t count = bands.bands.empty() ? 0 : bands.bands.front().size();
        for (std::size_t b = 0; b < count; ++b)
            header.push_back("band" + std::to_string(b) + "_Hz");
        auto csv = ctx.table("bdg_bands.csv", meta, header);
        for (std::size_t i = 0; i < bands.q_b.size(); ++i) {
            std::vector<double> row{bands.q_b[i]};
            for (double e : bands.bands[i])
                row.push_back(energy_to_frequency(e));
            csv.row(row);
        }
    }
    {
        auto csv = ctx.table("bdg_gaps.csv", meta,
                             {"fundamental", "n", "k_c_radpm", "q_n_radpm", "U_n_Hz", "E_B_Hz", "gap_Hz",
                              "gap_ref_Hz", "drift"});
        for (const auto& g : bands.gaps)
            csv.row({std::to_string(g.fundamental + 1), std::to_string(g.n), num(g.k_c), num(g.q_n),
                     num(energy_to_frequency(g.U_n)), num(energy_to_frequency(g.E_B)),
                     num(energy_to_frequency(g.gap)), num(energy_to_frequency(g.gap_ref)), num(g.drift())});
    }
    ctx.doc["results"] = {{"M", bands.M},
                          {"converged", bands.converged},
                          {"doubling_drift", bands.doubling_drift},
                          {"oracle", oracle_json(oracle_compare(ctx.gaps, bands))}};
}

struct Probe {
    std::size_t fundamental;
    int n;
    double k_c;
    double q;
    double U;
};

Probe bragg_probe(const Context& ctx)
{
    const auto& b = ctx.config.bragg;
    if (b.fundamental >= ctx.potential.fundamentals.size())
        throw ConfigError("bragg.fundamental exceeds the number of surface fundamentals");
    const auto& series = ctx.potential.fundamentals[b.fundamental];
    const auto n = static_cast<std::size_t>(b.harmonic);
    const double U = n <= series.U.size() ? series.U[n - 1] : 0.0;
    return {b.fundamental, b.harmonic, series.k_c, 0.5 * b.harmonic * series.k_c, U};
}

std::vector<double> dsf_grid(const Quasi1DParams& params, const Probe& probe, std::size_t points, double pad)
{
    const double T = kinetic_energy(probe.q, params.mass);
    const double E_B = bogoliubov_dispersion(probe.q, params.mu_tilde, params.mass);
    const double lo = T - 0.5 * std::abs(probe.U);
    const double hi = E_B + 0.5 * std::abs(probe.U);
    const double span = hi - lo;
    const double w_lo = std::max(0.0, lo - 0.05 * span) / hbar - pad;
    const double w_hi = (hi + 0.05 * span) / hbar + pad;
    return linspace(std::max(0.0, w_lo), w_hi, points);
}

json dsf_json(const DsfSpectrum& s)
{
    json branches = json::array();
    for (const auto& b : s.branches)
        branches.push_back({{"sign", b.sign},
                            {"support_low_Hz", energy_to_frequency(b.support_low)},
                            {"resonance_Hz", energy_to_frequency(b.support_high)},
                            {"weight", branch_weight(s, b)}});
    return branches;
}

void run_dsf(Context& ctx)
{
    auto& c = ctx.config;
    const auto probe = bragg_probe(ctx);
    const auto omega = dsf_grid(ctx.params, probe, c.bragg.omega_points, 0.0);
    const auto lda = dsf_lda(probe.q, omega, ctx.params, probe.U);
    const auto homogeneous = dsf_homogeneous(
        probe.q, omega, ctx.params);

    const std::vector<std::string> meta{"q_radpm = " + num(probe.q), "U_Hz = " + num(energy_to_frequency(probe.U)),
                                        "S per unit energy (1/J); weight = int S d(hbar omega)"};
    {
        std::vector<std::string> header{"omega_radps", "f_Hz"};
        for (const auto& b : lda.branches)
            header.push_back(b.sign < 0 ? "S_minus_perJ" : b.sign > 0 ? "S_plus_perJ" : "S_perJ");
        if (lda.branches.size() > 1)
            header.push_back("S_total_perJ");
        auto csv = ctx.table("dsf.csv", meta, header);
        const auto total = lda.total();
        for (std::size_t i = 0; i < omega.size(); ++i) {
            std::vector<double> row{omega[i], omega[i] / constants::two_pi};
            for (const auto& b : lda.branches)
                row.push_back(b.S[i]);
            if (lda.branches.size() > 1)
                row.push_back(total[i]);
            csv.row(row);
        }
    }
    {
        auto csv = ctx.table("dsf_homogeneous.csv", meta, {"omega_radps", "f_Hz", "S_perJ"});
        for (std::size_t i = 0; i < omega.size(); ++i)
            csv.row(std::vector<double>{omega[i], omega[i] / constants::two_pi, homogeneous.branches[0].S[i]});
    }
    json results{{"q_radpm", probe.q},
                 {"U_Hz", energy_to_frequency(probe.U)},
                 {"branches", dsf_json(lda)},
                 {"homogeneous_weight", branch_weight(homogeneous, homogeneous.branches[0])},
                 {"homogeneous_weight_expected",
                  ctx.params.N * kinetic_energy(probe.q, ctx.params.mass) /
                      bogoliubov_dispersion(probe.q, ctx.params.mu_tilde, ctx.params.mass)}};
    if (lda.branches.size() == 2) {
        const double sep = lda.branches[1].support_high - lda.branches[0].support_high;
        results["marker_separation_Hz"] = energy_to_frequency(sep);
        results["F_times_U_Hz"] = energy_to_frequency(
            std::abs(probe.U) * suppression_factor(probe.q, ctx.params.mu_tilde, ctx.params.mass));
    }
    ctx.doc["results"] = results;
}

void run_bragg(Context& ctx)
{
    auto& c = ctx.config;
    const auto probe = bragg_probe(ctx);
    const double E_B = bogoliubov_dispersion(probe.q, ctx.params.mu_tilde, ctx.params.mass);
    const double tau = c.bragg.tau.value_or(c.bragg.tau_in_hbar_over_EB * hbar / E_B);

    // the grid has to resolve the kernel: d_omega * tau <= 1
    auto omega = dsf_grid(ctx.params, probe, c.bragg.omega_points, 10.0 / tau);
    const double span = omega.back() - omega.front();
    const auto needed = static_cast<std::size_t>(std::ceil(span * tau)) + 1;
    if (needed > omega.size()) {
        if (needed > (std::size_t{1} << 22))
            throw ContractError("bragg: tau too long for the DSF grid (needs " + std::to_string(needed) +
                                " frequency points)");
        omega = linspace(omega.front(), omega.back(), needed);
    }
    const auto forward = dsf_lda(probe.q, omega, ctx.params, probe.U);
    const auto backward = zero_temperature_counterpart(forward);
    double w_res = 0.0;
    for (const auto& b : forward.branches)
        w_res = std::max(w_res, b.resonance_omega());

    BraggOptions options;
    options.time_points = c.numerics.time_points;
    options.position_closure = c.bragg.closure;
    options.displacement = c.bragg.displacement;
    options.density_points = c.numerics.density_points;

    const std::vector<std::string> meta{"q_radpm = " + num(probe.q), "tau_s = " + num(tau),
                                        "V_B = " + num(c.bragg.V_B)};
    {
        BraggPulse pulse{probe.q, c.bragg.omega.value_or(w_res), c.bragg.V_B, tau};
        const auto signal = bragg_signal(pulse, forward, backward, ctx.params, ctx.potential, options);
        auto csv = ctx.table("bragg_signal.csv", [&] {
            auto m = meta;
            m.push_back("omega_radps = " + num(pulse.omega));
            m.push_back(std::string("closure = ") + (c.bragg.closure ? "true" : "false"));
            return m;
        }(),
                             {"t_s", "dPdt_N", "P_kgmps", "X_m", "trap_N", "casimir_N", "drive_N"});
        for (std::size_t i = 0; i < signal.t.size(); ++i)
            csv.row(std::vector<double>{signal.t[i], signal.dPdt[i], signal.P[i], signal.X[i], signal.trap_term[i],
                                        signal.casimir_term[i], signal.drive_term[i]});
        ctx.doc["results"]["signal"] = {{"omega_radps", pulse.omega},
                                        {"P_tau_kgmps", signal.P.back()},
                                        {"rate_N", signal.time_averaged_rate()}};
    }
    {
        auto csv = ctx.table("bragg_sweep.csv", meta, {"omega_radps", "f_Hz", "P_tau_kgmps", "rate_N"});
        const auto sweep = linspace(omega.front(), omega.back(), c.bragg.sweep_points);
        double peak = 0.0;
        double peak_w = 0.0;
        for (double w : sweep) {
            BraggPulse pulse{probe.q, w, c.bragg.V_B, tau};
            const double P = bragg_momentum(pulse, forward, backward, tau);
            csv.row(std::vector<double>{w, w / constants::two_pi, P, P / tau});
            if (std::abs(P) > std::abs(peak)) {
                peak = P;
                peak_w = w;
            }
        }
        ctx.doc["results"]["sweep"] = {{"points", sweep.size()},
                                       {"peak_omega_radps", peak_w},
                                       {"peak_P_kgmps", peak}};
    }
    ctx.doc["results"]["tau_s"] = tau;
    ctx.doc["results"]["resonance_omega_radps"] = w_res;
}

template <class E>
[[noreturn]] void rethrow_with(const std::string& prefix, const E& ex)
{
    throw E(prefix + ex.what());
}

} // namespace

RunSummary run_scenario(const RunConfig& config, Command command, const std::filesystem::path& out_dir)
{
    const std::string prefix = command_name(command) + ": ";
    try {
        std::filesystem::create_directories(out_dir);
        Context ctx{config, out_dir, {}, {}, {}, {}, {}};
        ctx.doc["command"] = command_name(command);
        ctx.doc["config"] = config.source.filename().string();
        ctx.doc["inputs"] = inputs_json(config);

        ctx.params = derive_quasi1d(config.trap, config.species);
        ctx.potential = lateral_coefficients(config.surface, config.species);
        ctx.potential.U_N = config.trap.U_N_offset;
        ctx.gaps = perturbative_gaps(ctx.params, ctx.potential);

        std::vector<std::string> warnings = config.trap.validity_warnings();
        for (auto& w : config.surface.validity_warnings())
            warnings.push_back(w);
        for (auto& w : ctx.gaps.warnings)
            warnings.push_back(w);

        ctx.doc["derived"] = params_json(ctx.params);
        ctx.doc["lateral_potential"] = potential_json(ctx.potential);
        ctx.doc["gap_report"] = gaps_json(ctx.gaps);
        ctx.doc["regime"] = regime_json(
            regime_check(ctx.params, config.surface, ctx.potential, config.species, config.T_env, config.T_bec));
        ctx.doc["warnings"] = warnings;

        switch (command) {
        case Command::potential: run_potential(ctx); break;
        case Command::spectrum: run_spectrum(ctx); break;
        case Command::bdg: run_bdg(ctx); break;
        case Command::dsf: run_dsf(ctx); break;
        case Command::bragg: run_bragg(ctx); break;
        }

        ctx.manifest.push_back(out_dir / "run_summary.json");
        json files = json::array();
        for (const auto& p : ctx.manifest)
            files.push_back(p.filename().string());
        ctx.doc["manifest"] = files;
        std::ofstream out(out_dir / "run_summary.json", std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + (out_dir / "run_summary.json").string());
        out << ctx.doc.dump(2) << '\n';
        return RunSummary{ctx.doc, ctx.manifest};
    }
    catch (const ConfigError& ex) { rethrow_with(prefix, ex); }
    catch (const DomainError& ex) { rethrow_with(prefix, ex); }
    catch (const ExtrapolationError& ex) { rethrow_with(prefix, ex); }
    catch (const InstabilityError& ex) { rethrow_with(prefix, ex); }
    catch (const ContractError& ex) { rethrow_with(prefix, ex); }
    catch (const UnsupportedConfiguration& ex) { rethrow_with(prefix, ex); }
    catch (const InternalError& ex) { rethrow_with(prefix, ex); }
}

} // namespace casimir_bec
