#pragma once
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgsym/numerics/errors.hpp"
#include "rgsym/oracles/residual.hpp"

namespace rgsym::cli {

// One verified property. Asserted checks pass iff defect <= tolerance.
struct Check {
    std::string name;
    std::optional<double> pt, rg, oracle;
    double defect = 0.0;
    std::optional<double> tolerance;
    std::string note;

    bool asserted() const { return tolerance.has_value(); }
    bool pass() const { return !asserted() || (std::isfinite(defect) && defect <= *tolerance); }
};

struct SingularityRecord {
    std::string name;
    double predicted = 0.0;
    double detected = 0.0;
    double rel_error() const { return std::abs(detected - predicted) / std::abs(predicted); }
};

struct Table {
    std::string name; // file stem
    std::vector<std::string> columns; // "name [unit]"
    std::vector<std::vector<double>> rows;
};

struct Plot {
    std::string name; // file stem
    std::string script;
};

struct SuiteResult {
    std::string id;
    std::vector<Check> checks;
    std::vector<ResidualReport> residuals;
    std::vector<SingularityRecord> singularities;
    std::vector<Table> tables;
    std::vector<Plot> plots;
    double seconds = 0.0;

    bool pass() const
    {
        for (const auto& c : checks)
            if (!c.pass())
                return false;
        return true;
    }

    Check& add(Check c)
    {
        checks.push_back(std::move(c));
        return checks.back();
    }

    // Runs a check body; a numerical failure becomes a failed record instead of aborting the suite.
    void guard(const std::string& name, double tolerance, const std::function<void()>& body)
    {
        try {
            body();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            add({name, {}, {}, {}, std::numeric_limits<double>::infinity(), tolerance, std::string("error: ") + e.what()});
        }
    }
};

namespace detail {
inline nlohmann::json opt(const std::optional<double>& v)
{
    if (!v || !std::isfinite(*v))
        return nullptr;
    return *v;
}
inline nlohmann::json num(double v)
{
    if (!std::isfinite(v))
        return std::isnan(v) ? nlohmann::json("nan") : nlohmann::json(v > 0 ? "inf" : "-inf");
    return v;
}
} // namespace detail

inline nlohmann::json to_json(const Check& c)
{
    return {{"name", c.name},         {"pt", detail::opt(c.pt)},       {"rg", detail::opt(c.rg)},
            {"oracle", detail::opt(c.oracle)}, {"defect", detail::num(c.defect)}, {"tolerance", detail::opt(c.tolerance)},
            {"asserted", c.asserted()}, {"pass", c.pass()},            {"note", c.note}};
}

inline nlohmann::json to_json(const ResidualReport& r)
{
    return {{"equation_id", r.equation_id},
            {"grid", r.grid},
            {"max_residual", detail::num(r.max_residual)},
            {"l2_residual", detail::num(r.l2_residual)},
            {"convergence_order", detail::opt(r.convergence_order)},
            {"notes", r.notes}};
}

inline nlohmann::json to_json(const SingularityRecord& s)
{
    return {{"name", s.name},
            {"t_sing_predicted", detail::num(s.predicted)},
            {"t_sing_detected", detail::num(s.detected)},
            {"relative_error", detail::num(s.rel_error())}};
}

inline std::string format_table(const Table& t, const std::string& scenario)
{
    std::string out = "# scenario: " + scenario + "\n# table: " + t.name + "\n#";
    for (const auto& c : t.columns)
        out += "  " + c;
    out += "\n";
    char buf[32];
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12e", row[i]);
            out += (i ? " " : "") + std::string(buf);
        }
        out += "\n";
    }
    return out;
}

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write '" + p.string() + "'");
    f << text;
}

} // namespace rgsym::cli
