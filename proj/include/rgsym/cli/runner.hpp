#pragma once
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgsym/cli/params.hpp"
#include "rgsym/cli/report.hpp"
#include "rgsym/cli/suites.hpp"

namespace rgsym::cli {

struct RunConfig {
    std::string scenario;
    Overrides overrides;
    std::filesystem::path output_dir = "rgsym_out";
    std::uint64_t seed = 12345;
    bool fast = false;
};

struct RunOutcome {
    nlohmann::json report;
    std::vector<std::string> failed;
    int exit_code = 0;
};

inline std::vector<std::string> report_sections(const std::string& scenario)
{
    if (scenario != "verify-all")
        return {scenario};
    return {"beam", "bunch", "chaplygin-slab", "chaplygin-soliton", "hopf", "resonance", "transfer"};
}

// Canonical text of everything that determines the numbers: mode, seed and resolved parameters.
inline std::string canonical_config(const RunConfig& rc)
{
    std::string s = "scenario=" + rc.scenario + "\nmode=" + (rc.fast ? "fast" : "full") +
                    "\nseed=" + std::to_string(rc.seed) + "\ndefaults=" + defaults_version + "\n";
    for (const auto& sec : report_sections(rc.scenario)) {
        const auto p = resolve_params(sec, rc.fast, rc.overrides);
        for (const auto& [k, v] : p.values())
            s += sec + "." + k + "=" + v + "\n";
    }
    return s;
}

inline RunOutcome run(const RunConfig& rc, std::ostream& log)
{
    scenario_spec(rc.scenario);
    nlohmann::json params = nlohmann::json::object();
    for (const auto& sec : report_sections(rc.scenario))
        params[sec] = resolve_params(sec, rc.fast, rc.overrides).values();
    const std::string canon = canonical_config(rc);

    std::error_code ec;
    std::filesystem::create_directories(rc.output_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + rc.output_dir.string() + "': " + ec.message());

    const auto results = run_suites(rc.scenario, rc.fast, rc.seed, rc.overrides);

    RunOutcome out;
    nlohmann::json checks = nlohmann::json::array(), residuals = nlohmann::json::array(),
                   sings = nlohmann::json::array(), artifacts = nlohmann::json::array(),
                   suites = nlohmann::json::array();
    for (const auto& r : results) {
        std::size_t n_fail = 0;
        for (const auto& c : r.checks) {
            auto j = to_json(c);
            j["suite"] = r.id;
            checks.push_back(j);
            if (!c.pass()) {
                ++n_fail;
                out.failed.push_back(r.id + ": " + c.name);
            }
        }
        for (const auto& res : r.residuals) {
            auto j = to_json(res);
            j["suite"] = r.id;
            residuals.push_back(j);
        }
        for (const auto& s : r.singularities) {
            auto j = to_json(s);
            j["suite"] = r.id;
            sings.push_back(j);
        }
        for (const auto& t : r.tables) {
            write_text(rc.output_dir / (t.name + ".dat"), format_table(t, r.id));
            artifacts.push_back(t.name + ".dat");
        }
        for (const auto& p : r.plots) {
            write_text(rc.output_dir / (p.name + ".gp"), p.script);
            artifacts.push_back(p.name + ".gp");
        }
        suites.push_back({{"id", r.id}, {"checks", r.checks.size()}, {"failed", n_fail}, {"seconds", r.seconds}});
        log << (n_fail ? "FAIL " : "ok   ") << r.id << ": " << r.checks.size() - n_fail << "/" << r.checks.size()
            << " checks pass (" << r.seconds << " s)\n";
    }

    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
    out.report = {{"scenario", rc.scenario},
                  {"mode", rc.fast ? "fast" : "full"},
                  {"seed", rc.seed},
                  {"parameters", params},
                  {"suites", suites},
                  {"checks", checks},
                  {"residual_reports", residuals},
                  {"singularities", sings},
                  {"artifacts", artifacts},
                  {"passed", out.failed.empty()},
                  {"failed_checks", out.failed},
                  {"provenance",
                   {{"toolkit_version", toolkit_version},
                    {"defaults_version", defaults_version},
                    {"config_hash", std::string("fnv1a64:") + hash},
                    {"timestamp", utc_timestamp()}}}};
    write_text(rc.output_dir / "report.json", out.report.dump(2) + "\n");
    out.exit_code = out.failed.empty() ? 0 : 1;
    return out;
}

inline void list_scenarios(std::ostream& os)
{
    for (const auto& s : scenario_catalog()) {
        os << s.id << ": " << s.description << "\n";
        for (const auto& p : s.params)
            os << "    " << p.key << " = " << p.full << " (fast " << p.fast << ")  " << p.doc << "\n";
    }
}

} // namespace rgsym::cli
