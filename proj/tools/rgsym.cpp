#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rgsym/cli/runner.hpp"

using namespace rgsym;

int main(int argc, char** argv)
{
    CLI::App app{"RG symmetry toolkit: scenario runner"};
    app.set_version_flag("--version", cli::toolkit_version);
    app.require_subcommand(1);

    cli::RunConfig rc;
    std::string config_path;
    auto* run = app.add_subcommand("run", "run a scenario and write report, tables and plot scripts");
    run->add_option("--scenario", rc.scenario, "scenario id (see list-scenarios)")->required();
    run->add_option("--config", config_path, "sectioned key = value file")->check(CLI::ExistingFile);
    run->add_option("--output", rc.output_dir, "output directory")->capture_default_str();
    run->add_option("--seed", rc.seed, "seed for random sampling")->capture_default_str();
    run->add_flag("--fast", rc.fast, "use the fast resolution table");
    run->allow_extras();
    run->footer("Parameter overrides: --section.key=value, or --key value for the selected scenario.");

    auto* list = app.add_subcommand("list-scenarios", "print the scenario catalog with default parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*list) {
        cli::list_scenarios(std::cout);
        return 0;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw ConfigError("cannot open config '" + config_path + "'");
            rc.overrides = cli::parse_config(in);
        }
        cli::scenario_spec(rc.scenario);
        cli::parse_extra_tokens(rc.overrides, run->remaining(), rc.scenario);
        const auto out = cli::run(rc, std::cout);
        std::cout << "report: " << (rc.output_dir / "report.json").string() << "\n";
        if (out.exit_code != 0) {
            std::cerr << "failing checks:\n";
            for (const auto& f : out.failed)
                std::cerr << "  " << f << "\n";
        }
        return out.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
