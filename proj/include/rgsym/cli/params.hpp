#pragma once
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rgsym/numerics/errors.hpp"

namespace rgsym::cli {

inline constexpr const char* toolkit_version = "1.0.0";
// Bumped whenever a fast or full default below changes.
inline constexpr const char* defaults_version = "2026.1";

struct ParamSpec {
    std::string key;
    std::string fast;
    std::string full;
    std::string doc;
};

struct ScenarioSpec {
    std::string id;
    std::string description;
    std::vector<ParamSpec> params;
};

// Scenario catalog with fast and full resolution tables, sorted by id.
inline const std::vector<ScenarioSpec>& scenario_catalog()
{
    static const std::vector<ScenarioSpec> cat = [] {
        std::vector<ScenarioSpec> c{
            {"beam",
             "self-focusing beam: Lie orbits of the point generator, on-axis blow-up, caustic and canonical coordinates",
             {{"alpha", "1.0", "1.0", "refraction strength"},
              {"beta", "0.5", "0.5", "diffraction strength"},
              {"nu", "1", "1", "geometry: 1 cylindrical, 0 slab"},
              {"chi_max", "4.0", "4.0", "boundary fan half-width"},
              {"n_fan", "81", "161", "orbits in the fan"}}},
            {"bunch",
             "expanding plasma bunch: kinetic invariants, self-similar density and a characteristics Monte Carlo oracle",
             {{"omega", "1.0", "1.0", "expansion rate"},
              {"t_max", "2.0", "2.0", "oracle end time"},
              {"n_particles", "100000", "100000", "Monte Carlo particles per species"},
              {"n_bins", "64", "64", "density histogram bins"},
              {"n_tracked", "200", "1000", "trajectories monitored for invariant drift"},
              {"oracle_species", "ions", "both", "ions, electrons or both"}}},
            {"chaplygin-slab",
             "quasi-Chaplygin slab spreading: erfi closed form, hodograph coordinates",
             {{"t_max", "3.0", "3.0", "largest residual time"},
              {"nt", "20", "40", "residual grid rows in t"},
              {"nx", "20", "40", "residual grid columns in x"},
              {"x_half", "2.0", "2.0", "residual grid half-width"},
              {"n_q", "41", "81", "round-trip samples on q in [0, 4]"}}},
            {"chaplygin-soliton",
             "quasi-Chaplygin soliton collapse: implicit solution, on-axis functional, Lie-Backlund coordinates",
             {{"t_max", "0.45", "0.45", "largest residual time"},
              {"nt", "20", "40", "residual grid rows in t"},
              {"nx", "20", "40", "residual grid columns in x"},
              {"x_half", "2.0", "2.0", "residual grid half-width"}}},
            {"hopf",
             "Hopf equation: implicit solution, characteristics oracle, gradient catastrophe, axis functional",
             {{"profile", "sine", "sine", "sine, linear or tabulated"},
              {"profile_file", "", "", "two-column x U file for the tabulated profile"},
              {"eps", "1.0", "1.0", "amplitude"},
              {"nt", "32", "64", "oracle grid rows in t"},
              {"nx", "32", "64", "oracle grid columns in x"},
              {"t_frac", "0.9", "0.9", "grid end time as a fraction of t_sing"},
              {"n_blowup", "201", "401", "x samples for blow-up detection"}}},
            {"resonance",
             "plasma resonance: cold and hot two-fluid fields, generator invariants, harmonic spectrum",
             {{"eps", "0.3", "0.3", "scaled amplitude"},
              {"omega", "1.0", "1.0", "frequency, equal to the plasma frequency"},
              {"theta", "0.2", "0.2", "incidence angle"},
              {"c", "1.0", "1.0", "light speed"},
              {"n_cold", "64", "64", "cold-model base grid"},
              {"n_hot", "257", "257", "hot-model base grid"},
              {"n_harmonics", "8", "8", "harmonics in the spectrum"},
              {"n_samples", "256", "256", "tau samples per period"},
              {"eta", "0.7", "0.7", "spectrum position"}}},
            {"transfer",
             "radiation transfer: linear and nonlinear attenuation laws, Lie flow and composition",
             {{"alpha0", "1.0", "1.0", "boundary intensity"},
              {"nu", "1.0", "1.0", "linear attenuation rate"},
              {"beta", "1.0", "1.0", "nonlinear attenuation rate"},
              {"depth_max", "10.0", "10.0", "largest optical depth"},
              {"n_random", "50", "50", "random composition triples"}}},
            {"verify-all", "every property suite above plus the group-law and invariance catalog", {}},
        };
        std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        return c;
    }();
    return cat;
}

inline const ScenarioSpec& scenario_spec(const std::string& id)
{
    for (const auto& s : scenario_catalog())
        if (s.id == id)
            return s;
    throw ConfigError("unknown scenario '" + id + "'");
}

// Resolved key-value parameters of one scenario.
class Params {
public:
    Params() = default;
    Params(std::string section, std::map<std::string, std::string> values)
        : section_(std::move(section)), values_(std::move(values))
    {
    }

    const std::map<std::string, std::string>& values() const { return values_; }
    const std::string& section() const { return section_; }

    const std::string& str(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError(section_ + ": missing parameter '" + key + "'");
        return it->second;
    }

    double real(const std::string& key) const
    {
        const auto& s = str(key);
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ConfigError(section_ + "." + key + ": '" + s + "' is not a number");
        return v;
    }

    long integer(const std::string& key) const
    {
        const auto& s = str(key);
        long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ConfigError(section_ + "." + key + ": '" + s + "' is not an integer");
        return v;
    }

    std::size_t count(const std::string& key, long min = 1) const
    {
        const long v = integer(key);
        if (v < min)
            throw ConfigError(section_ + "." + key + ": must be at least " + std::to_string(min));
        return static_cast<std::size_t>(v);
    }

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

private:
    std::string section_;
    std::map<std::string, std::string> values_;
};

using Overrides = std::map<std::string, std::map<std::string, std::string>>;

inline void check_known(const std::string& section, const std::string& key)
{
    const auto& spec = scenario_spec(section);
    for (const auto& p : spec.params)
        if (p.key == key)
            return;
    throw ConfigError("unknown parameter '" + key + "' in section [" + section + "]");
}

// Parses sectioned key = value text; keys outside a section are rejected.
inline Overrides parse_config(std::istream& in)
{
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(in);
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    Overrides out;
    for (const auto& it : items) {
        if (it.name == "++" || it.name == "--")
            continue; // section markers
        if (it.parents.empty() || it.parents.front() == "default")
            throw ConfigError("config: key '" + it.name + "' is not inside a [scenario] section");
        if (it.parents.size() != 1)
            throw ConfigError("config: nested sections are not supported");
        const auto& section = it.parents.front();
        check_known(section, it.name);
        if (it.inputs.size() != 1)
            throw ConfigError("config: " + section + "." + it.name + " needs exactly one value");
        out[section][it.name] = it.inputs.front();
    }
    return out;
}

// Applies a section.key=value assignment; a bare key is placed in default_section.
inline void apply_assignment(Overrides& ov, const std::string& lhs, const std::string& value,
                             const std::string& default_section)
{
    std::string section = default_section, key = lhs;
    if (auto dot = lhs.find('.'); dot != std::string::npos) {
        section = lhs.substr(0, dot);
        key = lhs.substr(dot + 1);
    }
    if (section.empty() || section == "verify-all")
        throw ConfigError("override '" + lhs + "' needs a scenario section");
    check_known(section, key);
    ov[section][key] = value;
}

// Turns leftover "--key value" and "--section.key=value" tokens into overrides.
inline void parse_extra_tokens(Overrides& ov, const std::vector<std::string>& tokens, const std::string& default_section)
{
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (tok.rfind("--", 0) != 0 || tok.size() == 2)
            throw ConfigError("unexpected argument '" + tok + "'");
        const std::string body = tok.substr(2);
        if (auto eq = body.find('='); eq != std::string::npos) {
            apply_assignment(ov, body.substr(0, eq), body.substr(eq + 1), default_section);
            continue;
        }
        if (i + 1 >= tokens.size())
            throw ConfigError("option '" + tok + "' needs a value");
        apply_assignment(ov, body, tokens[++i], default_section);
    }
}

inline Params resolve_params(const std::string& section, bool fast, const Overrides& ov)
{
    std::map<std::string, std::string> v;
    for (const auto& p : scenario_spec(section).params)
        v[p.key] = fast ? p.fast : p.full;
    if (auto it = ov.find(section); it != ov.end())
        for (const auto& [k, val] : it->second) {
            check_known(section, k);
            v[k] = val;
        }
    return Params(section, std::move(v));
}

inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace rgsym::cli
