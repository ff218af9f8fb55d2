#include "casimir_bec/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "casimir_bec/constants.hpp"
#include "casimir_bec/errors.hpp"

namespace casimir_bec {

namespace {

struct UnitInfo {
    Dimension dimension;
    double factor;
};

const std::map<std::string, UnitInfo>& unit_table()
{
    static const std::map<std::string, UnitInfo> table{
        {"m", {Dimension::length, 1.0}},
        {"cm", {Dimension::length, 1e-2}},
        {"mm", {Dimension::length, 1e-3}},
        {"um", {Dimension::length, 1e-6}},
        {"\xC2\xB5m", {Dimension::length, 1e-6}},
        {"\xCE\xBCm", {Dimension::length, 1e-6}},
        {"nm", {Dimension::length, 1e-9}},
        {"Hz", {Dimension::frequency, constants::two_pi}},
        {"kHz", {Dimension::frequency, constants::two_pi * 1e3}},
        {"MHz", {Dimension::frequency, constants::two_pi * 1e6}},
        {"rad/s", {Dimension::frequency, 1.0}},
        {"J", {Dimension::energy, 1.0}},
        {"K", {Dimension::temperature, 1.0}},
        {"mK", {Dimension::temperature, 1e-3}},
        {"uK", {Dimension::temperature, 1e-6}},
        {"nK", {Dimension::temperature, 1e-9}},
        {"kg", {Dimension::mass, 1.0}},
        {"u", {Dimension::mass, constants::atomic_mass_unit}},
        {"amu", {Dimension::mass, constants::atomic_mass_unit}},
        {"m3", {Dimension::volume, 1.0}},
        {"m^3", {Dimension::volume, 1.0}},
        {"A3", {Dimension::volume, 1e-30}},
        {"s", {Dimension::time, 1.0}},
        {"ms", {Dimension::time, 1e-3}},
        {"us", {Dimension::time, 1e-6}},
        {"ns", {Dimension::time, 1e-9}},
    };
    return table;
}

const char* dimension_name(Dimension d)
{
    switch (d) {
    case Dimension::length: return "length (m, cm, mm, um, nm)";
    case Dimension::frequency: return "frequency (Hz, kHz, MHz, rad/s)";
    case Dimension::energy: return "energy (J, or Hz/kHz meaning 2 pi hbar f)";
    case Dimension::temperature: return "temperature (K, mK, uK, nK)";
    case Dimension::mass: return "mass (kg, u)";
    case Dimension::volume: return "volume (m3, A3)";
    case Dimension::time: return "time (s, ms, us, ns)";
    case Dimension::dimensionless: return "plain number";
    }
    return "?";
}

const char* short_name(Dimension d)
{
    switch (d) {
    case Dimension::length: return "length";
    case Dimension::frequency: return "frequency";
    case Dimension::energy: return "energy";
    case Dimension::temperature: return "temperature";
    case Dimension::mass: return "mass";
    case Dimension::volume: return "volume";
    case Dimension::time: return "time";
    case Dimension::dimensionless: return "number";
    }
    return "?";
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

} // namespace

double parse_quantity(const std::string& text, Dimension dimension)
{
    const std::string s = trim(text);
    if (s.empty())
        throw ConfigError("empty value");
    const char* begin = s.c_str();
    char* end = nullptr;
    const double number = std::strtod(begin, &end);
    if (end == begin)
        throw ConfigError("'" + s + "' is not a number");
    if (!std::isfinite(number))
        throw ConfigError("'" + s + "' is not finite");
    const std::string unit = trim(std::string(end));

    if (dimension == Dimension::dimensionless) {
        if (!unit.empty())
            throw ConfigError("'" + s + "': expected a plain number, got unit '" + unit + "'");
        return number;
    }
    if (unit.empty())
        throw ConfigError("'" + s + "': missing unit, expected a " + dimension_name(dimension));

    auto it = unit_table().find(unit);
    if (it == unit_table().end())
        throw ConfigError("'" + s + "': unknown unit '" + unit + "', expected a " + dimension_name(dimension));
    const UnitInfo info = it->second;
    if (info.dimension == dimension)
        return number * info.factor;
    // an energy may be written as the frequency f of E = 2 pi hbar f
    if (dimension == Dimension::energy && info.dimension == Dimension::frequency)
        return number * info.factor * constants::hbar;
    throw ConfigError("'" + s + "': unit '" + unit + "' is a " + short_name(info.dimension) + ", expected a " +
                      dimension_name(dimension));
}

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
};

class Reader {
public:
    Reader(std::string source, std::map<std::string, Section>& sections, std::vector<std::string>& errors)
        : source_(std::move(source)), sections_(sections), errors_(errors)
    {
    }

    bool has_section(const std::string& name) const { return sections_.count(name) != 0; }

    bool has(const std::string& section, const std::string& key) const
    {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.entries.count(key) != 0;
    }

    void error(const std::string& section, int line, const std::string& message)
    {
        std::ostringstream os;
        os << source_;
        if (line > 0)
            os << ":" << line;
        os << ": [" << section << "] " << message;
        errors_.push_back(os.str());
    }

    Entry* entry(const std::string& section, const std::string& key)
    {
        auto s = sections_.find(section);
        if (s == sections_.end())
            return nullptr;
        auto e = s->second.entries.find(key);
        if (e == s->second.entries.end())
            return nullptr;
        e->second.used = true;
        return &e->second;
    }

    void missing(const std::string& section, const std::string& key)
    {
        auto s = sections_.find(section);
        error(section, s == sections_.end() ? 0 : s->second.line, "missing required key '" + key + "'");
    }

    template <class Parse>
    void read(const std::string& section, const std::string& key, bool required, Parse&& parse)
    {
        Entry* e = entry(section, key);
        if (!e) {
            if (required)
                missing(section, key);
            return;
        }
        try {
            parse(e->value);
        }
        catch (const ConfigError& ex) {
            error(section, e->line, key + ": " + ex.what());
        }
    }

    void quantity(const std::string& section, const std::string& key, Dimension d, double& out, bool required)
    {
        read(section, key, required, [&](const std::string& v) { out = parse_quantity(v, d); });
    }

    void quantity(const std::string& section, const std::string& key, Dimension d, std::optional<double>& out)
    {
        read(section, key, false, [&](const std::string& v) { out = parse_quantity(v, d); });
    }

    template <class Int>
    void integer(const std::string& section, const std::string& key, Int& out, long long min_value)
    {
        read(section, key, false, [&](const std::string& v) {
            const std::string s = trim(v);
            std::size_t pos = 0;
            long long n = 0;
            try {
                n = std::stoll(s, &pos);
            }
            catch (const std::exception&) {
                throw ConfigError("'" + s + "' is not an integer");
            }
            if (pos != s.size())
                throw ConfigError("'" + s + "' is not an integer");
            if (n < min_value)
                throw ConfigError("must be at least " + std::to_string(min_value));
            out = static_cast<Int>(n);
        });
    }

    void boolean(const std::string& section, const std::string& key, bool& out)
    {
        read(section, key, false, [&](const std::string& v) {
            const std::string s = trim(v);
            if (s == "true" || s == "yes" || s == "on" || s == "1")
                out = true;
            else if (s == "false" || s == "no" || s == "off" || s == "0")
                out = false;
            else
                throw ConfigError("'" + s + "' is not a boolean (true/false)");
        });
    }

    void reject_unused()
    {
        for (auto& [name, section] : sections_)
            for (auto& [key, e] : section.entries)
                if (!e.used)
                    error(name, e.line, "unknown key '" + key + "'");
    }

private:
    std::string source_;
    std::map<std::string, Section>& sections_;
    std::vector<std::string>& errors_;
};

const std::set<std::string> known_sections{"species", "trap", "surface", "bragg", "numerics"};

} // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir,
                            const std::string& source_name)
{
    std::map<std::string, Section> sections;
    std::vector<std::string> errors;
    Reader r(source_name, sections, errors);

    {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        std::string current;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string line = raw;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (auto semi = line.find(';'); semi != std::string::npos)
                line.erase(semi);
            line = trim(line);
            if (line.empty())
                continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    r.error(current, line_no, "malformed section header '" + line + "'");
                    continue;
                }
                current = trim(line.substr(1, line.size() - 2));
                const bool species_block = current.rfind("species.", 0) == 0 && current.size() > 8;
                if (!known_sections.count(current) && !species_block)
                    r.error(current, line_no, "unknown section");
                if (sections.count(current))
                    r.error(current, line_no, "duplicate section");
                sections[current].line = line_no;
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                r.error(current, line_no, "expected 'key = value', got '" + line + "'");
                continue;
            }
            if (current.empty()) {
                r.error("", line_no, "key outside of any section");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            auto& section = sections[current];
            if (section.entries.count(key)) {
                r.error(current, line_no, "duplicate key '" + key + "'");
                continue;
            }
            section.entries[key] = Entry{value, line_no, false};
        }
    }

    RunConfig cfg;
    cfg.source = source_name;

    // [species] and [species.<name>]
    SpeciesRegistry registry;
    for (auto& [name, section] : sections) {
        if (name.rfind("species.", 0) != 0)
            continue;
        AtomSpecies s;
        s.name = name.substr(8);
        r.quantity(name, "mass", Dimension::mass, s.mass, true);
        r.quantity(name, "scattering_length", Dimension::length, s.scattering_length, true);
        r.quantity(name, "polarizability", Dimension::volume, s.polarizability_over_eps0, true);
        r.quantity(name, "transition_wavelength", Dimension::length, s.transition_wavelength, true);
        try {
            if (s.mass > 0 && s.scattering_length > 0 && s.polarizability_over_eps0 > 0 &&
                s.transition_wavelength > 0)
                registry.add(s);
        }
        catch (const Error& ex) {
            r.error(name, section.line, ex.what());
        }
    }
    r.read("species", "name", false, [&](const std::string& v) { cfg.species_name = trim(v); });
    r.quantity("species", "mass", Dimension::mass, cfg.species_overrides.mass);
    r.quantity("species", "scattering_length", Dimension::length, cfg.species_overrides.scattering_length);
    r.quantity("species", "polarizability", Dimension::volume, cfg.species_overrides.polarizability_over_eps0);
    r.quantity("species", "transition_wavelength", Dimension::length, cfg.species_overrides.transition_wavelength);
    try {
        cfg.species = registry.lookup(cfg.species_name, cfg.species_overrides);
        cfg.species.validate();
    }
    catch (const Error& ex) {
        r.error("species", sections.count("species") ? sections["species"].line : 0, ex.what());
    }

    // [trap]
    r.quantity("trap", "omega_r", Dimension::frequency, cfg.trap.omega_r, true);
    r.quantity("trap", "omega_x", Dimension::frequency, cfg.trap.omega_x, true);
    r.quantity("trap", "N", Dimension::dimensionless, cfg.trap.N, true);
    r.quantity("trap", "U_N", Dimension::energy, cfg.trap.U_N_offset, false);
    r.quantity("trap", "T_bec", Dimension::temperature, cfg.T_bec, false);

    // [surface]
    Fundamental first;
    double lambda_c = 0.0;
    r.quantity("surface", "lambda_c", Dimension::length, lambda_c, true);
    auto read_amplitudes = [&](const std::string& key, std::vector<double>& out, bool required) {
        r.read("surface", key, required, [&](const std::string& v) {
            for (const auto& item : split_list(v))
                out.push_back(parse_quantity(item, Dimension::length));
        });
    };
    read_amplitudes("h", first.h, true);
    if (lambda_c > 0.0) {
        first.k_c = constants::two_pi / lambda_c;
        cfg.surface.fundamentals.push_back(first);
    }
    else if (r.has("surface", "lambda_c")) {
        r.error("surface", r.entry("surface", "lambda_c")->line, "lambda_c must be positive");
    }
    if (r.has("surface", "lambda_c2") || r.has("surface", "h2")) {
        Fundamental second;
        double lambda_c2 = 0.0;
        r.quantity("surface", "lambda_c2", Dimension::length, lambda_c2, true);
        read_amplitudes("h2", second.h, true);
        if (lambda_c2 > 0.0) {
            second.k_c = constants::two_pi / lambda_c2;
            cfg.surface.fundamentals.push_back(second);
        }
    }
    r.quantity("surface", "z_cm", Dimension::length, cfg.surface.z_cm, true);
    r.quantity("surface", "T_env", Dimension::temperature, cfg.T_env, false);

    std::optional<double> eta;
    r.quantity("surface", "eta_F", Dimension::dimensionless, eta);
    std::optional<std::string> material;
    r.read("surface", "material", false, [&](const std::string& v) {
        const std::string s = trim(v);
        if (s != "perfect" && s != "eta" && s != "tabulated")
            throw ConfigError("'" + s + "' is not one of perfect, eta, tabulated");
        material = s;
    });
    std::optional<std::string> response_file;
    r.read("surface", "response_file", false, [&](const std::string& v) { response_file = trim(v); });

    const std::string kind = material.value_or(eta ? "eta" : response_file ? "tabulated" : "perfect");
    auto line_of = [&](const std::string& key) {
        auto* e = r.entry("surface", key);
        return e ? e->line : 0;
    };
    if (kind == "perfect") {
        cfg.surface.material.kind = MaterialKind::perfect;
        if (eta)
            r.error("surface", line_of("eta_F"), "eta_F requires material = eta");
    }
    else if (kind == "eta") {
        cfg.surface.material.kind = MaterialKind::scalar_eta;
        if (!eta)
            r.missing("surface", "eta_F");
        else if (*eta < 0.0 || *eta > 1.0)
            r.error("surface", line_of("eta_F"), "eta_F = " + std::to_string(*eta) + " outside [0, 1]");
        else
            cfg.surface.material.eta_F = *eta;
    }
    else {
        cfg.surface.material.kind = MaterialKind::tabulated;
        if (!response_file)
            r.missing("surface", "response_file");
        else {
            std::filesystem::path p = *response_file;
            cfg.surface.material.table_path = p.is_absolute() ? p : base_dir / p;
        }
    }
    if (response_file && kind != "tabulated")
        r.error("surface", line_of("response_file"), "response_file requires material = tabulated");

    // [bragg]
    int fundamental = 1;
    r.integer("bragg", "fundamental", fundamental, 1);
    cfg.bragg.fundamental = static_cast<std::size_t>(fundamental - 1);
    r.integer("bragg", "harmonic", cfg.bragg.harmonic, 1);
    r.quantity("bragg", "V_B", Dimension::dimensionless, cfg.bragg.V_B, false);
    r.quantity("bragg", "tau", Dimension::time, cfg.bragg.tau);
    r.quantity("bragg", "tau_EB", Dimension::dimensionless, cfg.bragg.tau_in_hbar_over_EB, false);
    r.quantity("bragg", "omega", Dimension::frequency, cfg.bragg.omega);
    r.integer("bragg", "sweep_points", cfg.bragg.sweep_points, 2);
    r.integer("bragg", "omega_points", cfg.bragg.omega_points, 16);
    r.boolean("bragg", "closure", cfg.bragg.closure);
    r.quantity("bragg", "displacement", Dimension::length, cfg.bragg.displacement, false);
    if (cfg.bragg.fundamental >= std::max<std::size_t>(cfg.surface.fundamentals.size(), 1))
        r.error("bragg", line_of("fundamental"), "fundamental index exceeds the number of surface fundamentals");
    if (cfg.bragg.tau && !(*cfg.bragg.tau > 0.0))
        r.error("bragg", 0, "tau must be positive");
    if (!(cfg.bragg.tau_in_hbar_over_EB > 0.0))
        r.error("bragg", 0, "tau_EB must be positive");

    // [numerics]
    r.integer("numerics", "bdg_cutoff", cfg.numerics.bdg_cutoff, 4);
    r.integer("numerics", "bdg_q_points", cfg.numerics.bdg_q_points, 2);
    r.integer("numerics", "band_count", cfg.numerics.band_count, 1);
    r.integer("numerics", "density_points", cfg.numerics.density_points, 16);
    r.integer("numerics", "branch_points", cfg.numerics.branch_points, 2);
    r.integer("numerics", "time_points", cfg.numerics.time_points, 2);
    int max_harmonic = 0;
    if (r.has("numerics", "max_harmonic")) {
        r.integer("numerics", "max_harmonic", max_harmonic, 1);
        cfg.numerics.max_harmonic = max_harmonic;
    }

    r.reject_unused();

    if (errors.empty()) {
        auto check = [&](const std::string& section, auto&& fn) {
            try {
                fn();
            }
            catch (const Error& ex) {
                r.error(section, sections.count(section) ? sections[section].line : 0, ex.what());
            }
        };
        check("trap", [&] { cfg.trap.validate(); });
        check("surface", [&] { cfg.surface.validate(); });
        if (!(cfg.T_bec > 0.0))
            r.error("trap", 0, "T_bec must be positive");
        if (!(cfg.T_env > 0.0))
            r.error("surface", 0, "T_env must be positive");
    }

    if (!errors.empty()) {
        std::ostringstream os;
        os << errors.size() << " configuration error" << (errors.size() == 1 ? "" : "s") << ":";
        for (const auto& e : errors)
            os << "\n  " << e;
        throw ConfigError(os.str());
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.parent_path(), path.string());
}

} // namespace casimir_bec
