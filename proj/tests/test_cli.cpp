#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "rgsym/cli/runner.hpp"

using namespace rgsym;
namespace fs = std::filesystem;

namespace {

struct Proc {
    int code;
    std::string out;
};

Proc spawn(const std::string& args)
{
    const std::string cmd = std::string(RGSYM_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return {-1, ""};
    std::string out;
    char buf[4096];
    while (auto n = fread(buf, 1, sizeof buf, p))
        out.append(buf, n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path scratch(const std::string& name)
{
    auto d = fs::temp_directory_path() / ("rgsym_cli_test_" + name);
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST(CliConfig, ParsesSectionsAndRejectsUnknownKeys)
{
    std::istringstream good("; comment\n[hopf]\neps = 2.5\nprofile = linear\n[beam]\nalpha = 3\n");
    const auto ov = cli::parse_config(good);
    EXPECT_EQ(ov.at("hopf").at("eps"), "2.5");
    EXPECT_EQ(ov.at("hopf").at("profile"), "linear");
    EXPECT_EQ(ov.at("beam").at("alpha"), "3");

    std::istringstream unknown_key("[hopf]\nepsilon = 1\n");
    EXPECT_THROW(cli::parse_config(unknown_key), ConfigError);
    std::istringstream unknown_section("[shock]\neps = 1\n");
    EXPECT_THROW(cli::parse_config(unknown_section), ConfigError);
    std::istringstream bare("eps = 1\n");
    EXPECT_THROW(cli::parse_config(bare), ConfigError);
}

TEST(CliConfig, OverridesAndDefaults)
{
    cli::Overrides ov;
    cli::parse_extra_tokens(ov, {"--eps", "0.7", "--beam.beta=0.1", "--profile=linear"}, "hopf");
    EXPECT_EQ(ov.at("hopf").at("eps"), "0.7");
    EXPECT_EQ(ov.at("hopf").at("profile"), "linear");
    EXPECT_EQ(ov.at("beam").at("beta"), "0.1");
    EXPECT_THROW(cli::parse_extra_tokens(ov, {"--eps"}, "hopf"), ConfigError);
    EXPECT_THROW(cli::parse_extra_tokens(ov, {"stray"}, "hopf"), ConfigError);
    EXPECT_THROW(cli::parse_extra_tokens(ov, {"--eps", "1"}, "verify-all"), ConfigError);

    const auto fast = cli::resolve_params("hopf", true, {}), full = cli::resolve_params("hopf", false, {});
    EXPECT_LT(fast.integer("nt"), full.integer("nt"));
    const auto p = cli::resolve_params("hopf", false, ov);
    EXPECT_DOUBLE_EQ(p.real("eps"), 0.7);
    EXPECT_THROW(cli::Params("x", {{"a", "1.5z"}}).real("a"), ConfigError);
    EXPECT_THROW(cli::Params("x", {{"a", "1.5"}}).integer("a"), ConfigError);
}

TEST(CliConfig, EveryScenarioHasCompleteDefaults)
{
    for (const auto& s : cli::scenario_catalog())
        for (const auto& prm : s.params) {
            EXPECT_FALSE(prm.key.empty());
            EXPECT_FALSE(prm.doc.empty());
        }
    const auto& cat = cli::scenario_catalog();
    for (std::size_t i = 1; i < cat.size(); ++i)
        EXPECT_LT(cat[i - 1].id, cat[i].id);
    EXPECT_EQ(cat.size(), 8u);
}

TEST(CliConfig, HashDependsOnResolvedValues)
{
    cli::RunConfig a;
    a.scenario = "transfer";
    auto b = a;
    EXPECT_EQ(cli::fnv1a(cli::canonical_config(a)), cli::fnv1a(cli::canonical_config(b)));
    b.overrides["transfer"]["nu"] = "2.0";
    EXPECT_NE(cli::fnv1a(cli::canonical_config(a)), cli::fnv1a(cli::canonical_config(b)));
    b = a;
    b.seed = 7;
    EXPECT_NE(cli::fnv1a(cli::canonical_config(a)), cli::fnv1a(cli::canonical_config(b)));
    EXPECT_EQ(cli::fnv1a(""), 1469598103934665603ull);
}

TEST(CliSuites, CheckRecordsCarryTolerances)
{
    const auto r = cli::transfer_suite(cli::resolve_params("transfer", true, {}), 1);
    ASSERT_FALSE(r.checks.empty());
    for (const auto& c : r.checks) {
        ASSERT_TRUE(c.asserted());
        EXPECT_EQ(c.pass(), c.defect <= *c.tolerance) << c.name;
    }
    EXPECT_TRUE(r.pass());
    cli::Check failing{"x", {}, {}, {}, 2.0, 1.0, ""};
    EXPECT_FALSE(failing.pass());
    cli::Check reported{"y", {}, {}, {}, 2.0, {}, ""};
    EXPECT_TRUE(reported.pass());
}

TEST(CliProcess, ListScenariosSortedAndStable)
{
    const auto a = spawn("list-scenarios"), b = spawn("list-scenarios");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("bunch: "), std::string::npos);
    EXPECT_LT(a.out.find("beam: "), a.out.find("bunch: "));
    EXPECT_LT(a.out.find("transfer: "), a.out.find("verify-all: "));
}

TEST(CliProcess, ConfigErrorsExitTwo)
{
    const auto d = scratch("errors");
    EXPECT_EQ(spawn("run --scenario nope --output " + d.string()).code, 2);
    EXPECT_EQ(spawn("run --scenario hopf --bogus 1 --output " + d.string()).code, 2);
    EXPECT_EQ(spawn("run --scenario hopf --eps abc --output " + d.string()).code, 2);
    EXPECT_EQ(spawn("run --scenario hopf --eps -1 --output " + d.string()).code, 2);
    EXPECT_EQ(spawn("run --output " + d.string()).code, 2);
    EXPECT_EQ(spawn("run --scenario hopf --config /nonexistent.ini").code, 2);
    fs::create_directories(d);
    std::ofstream(d / "bad.ini") << "[transfer]\nunknown = 3\n";
    EXPECT_EQ(spawn("run --scenario transfer --config " + (d / "bad.ini").string()).code, 2);
    EXPECT_FALSE(fs::exists(d / "report.json"));
}

TEST(CliProcess, HopfReportRecordsSingularity)
{
    const auto d = scratch("hopf");
    const auto p = spawn("run --scenario hopf --profile sine --eps 1.0 --fast --output " + d.string());
    ASSERT_EQ(p.code, 0) << p.out;
    const auto rep = nlohmann::json::parse(slurp(d / "report.json"));
    EXPECT_EQ(rep["scenario"], "hopf");
    EXPECT_EQ(rep["parameters"]["hopf"]["eps"], "1.0");
    EXPECT_TRUE(rep["passed"].get<bool>());
    bool found = false;
    for (const auto& s : rep["singularities"])
        if (s["name"] == "hopf.gradient_catastrophe") {
            found = true;
            EXPECT_NEAR(s["t_sing_detected"].get<double>(), 1.0, 0.01);
        }
    EXPECT_TRUE(found);
    for (const auto& c : rep["checks"])
        if (c["asserted"].get<bool>())
            EXPECT_EQ(c["pass"].get<bool>(), c["defect"].get<double>() <= c["tolerance"].get<double>());
    EXPECT_FALSE(rep["residual_reports"].empty());
    EXPECT_TRUE(rep["provenance"].contains("config_hash"));
    EXPECT_TRUE(rep["provenance"].contains("toolkit_version"));
    EXPECT_TRUE(fs::exists(d / "hopf_gradient.dat"));
    const auto script = slurp(d / "hopf_gradient.gp");
    EXPECT_NE(script.find("hopf_gradient.dat"), std::string::npos);
    EXPECT_NE(script.find("t_sing"), std::string::npos);
    const auto table = slurp(d / "hopf_fields.dat");
    EXPECT_EQ(table.rfind("# scenario: hopf", 0), 0u);
}

TEST(CliProcess, SolitonReportRecordsAxisValue)
{
    const auto d = scratch("soliton");
    const auto p = spawn("run --scenario chaplygin-soliton --output " + d.string());
    ASSERT_EQ(p.code, 0) << p.out;
    const auto rep = nlohmann::json::parse(slurp(d / "report.json"));
    bool found = false;
    for (const auto& c : rep["checks"])
        if (c["name"] == "soliton.axis_value") {
            found = true;
            EXPECT_NEAR(c["rg"].get<double>(), 2.0, 1e-6);
            EXPECT_TRUE(c["pass"].get<bool>());
        }
    EXPECT_TRUE(found);
}

TEST(CliProcess, DeterministicTablesForFixedSeed)
{
    const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    const std::string args = "run --scenario bunch --fast --n_particles 20000 --n_tracked 20 --seed 11 --output ";
    ASSERT_EQ(spawn(args + a.string()).code, 0);
    ASSERT_EQ(spawn(args + b.string()).code, 0);
    for (const auto& e : fs::directory_iterator(a))
        if (e.path().extension() == ".dat")
            EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
    ASSERT_EQ(spawn("run --scenario bunch --fast --n_particles 20000 --n_tracked 20 --seed 12 --output " + c.string()).code, 0);
    EXPECT_NE(slurp(a / "bunch_mc_ions.dat"), slurp(c / "bunch_mc_ions.dat"));
    auto ra = nlohmann::json::parse(slurp(a / "report.json")), rb = nlohmann::json::parse(slurp(b / "report.json"));
    for (auto* r : {&ra, &rb}) {
        (*r)["provenance"].erase("timestamp");
        for (auto& s : (*r)["suites"])
            s.erase("seconds");
    }
    EXPECT_EQ(ra, rb);
}

TEST(CliProcess, FailingCheckExitsOne)
{
    // a hot-model window that reaches wavebreaking fails its convergence checks
    const auto d = scratch("fail");
    const auto p = spawn("run --scenario resonance --eps 0.5 --output " + d.string());
    EXPECT_EQ(p.code, 1);
    EXPECT_NE(p.out.find("failing checks"), std::string::npos);
    const auto rep = nlohmann::json::parse(slurp(d / "report.json"));
    EXPECT_FALSE(rep["passed"].get<bool>());
    EXPECT_FALSE(rep["failed_checks"].empty());
}
