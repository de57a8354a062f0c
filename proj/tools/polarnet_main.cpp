// polarnet: configuration-driven batch optimization runs over multi-layer
// repeater networks, emitting plot-ready CSV/JSON convergence statistics.

#include "polarnet/experiment.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw polarnet::ConfigError("cannot open config file '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw polarnet::ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POLARNet experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format = "json";
    std::optional<int> experiments;
    std::optional<std::uint64_t> seed;
    std::optional<int> outer_passes;

    auto* run = app.add_subcommand("run", "run a scenario and emit its report");
    run->add_option("--config", config_path, "scenario config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--experiments", experiments, "override config experiment count");
    run->add_option("--seed", seed, "override config root seed");
    run->add_option("--outer-passes", outer_passes, "override config outer pass count");

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", config_path, "scenario config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        polarnet::ScenarioConfig config = polarnet::parse_scenario_config(load_json(config_path));
        if (experiments) config.experiments = *experiments;
        if (seed) config.root_seed = *seed;
        if (outer_passes) config.outer_passes = *outer_passes;
        config.validate();

        if (validate->parsed()) {
            std::cout << "config OK: " << config.policies.size() << " policies, "
                      << config.experiments << " experiments, "
                      << config.layer_sizes.layer_count() << " layers\n";
            return kExitOk;
        }

        const polarnet::ScenarioReport report = polarnet::run_scenario(config);
        const auto fmt = format == "csv" ? polarnet::ReportFormat::Csv
                                         : polarnet::ReportFormat::Json;
        polarnet::emit_report(report, fmt, out_dir);
        std::cout << "wrote " << (format == "csv" ? "per-policy CSV series" : "report.json")
                  << " to " << out_dir << "\n";
        return kExitOk;
    } catch (const polarnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
