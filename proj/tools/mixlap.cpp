// mixlap experiment runner.
//
// mixlap <experiment> --config cfg.json --out dir [--threads N] [--verbose]
//
// Exit codes: 0 all rows pass or inconclusive, 2 a hard assertion failed,
// 3 a solver failed to converge, 64 config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <string>

#include "mixlap/experiments.hpp"

namespace {

constexpr int kExitConfig = 64;

using Runner = mixlap::RunOutcome (*)(const mixlap::ExperimentConfig&, const std::string&, bool);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> r = {
        {"eig", mixlap::run_eig},
        {"fk-sweep", mixlap::run_fk_sweep},
        {"stability", mixlap::run_stability},
        {"superlevel", mixlap::run_superlevel},
        {"level-profile", mixlap::run_level_profile},
        {"scaling", mixlap::run_scaling},
        {"counterexample", mixlap::run_counterexample},
        {"hopf", mixlap::run_hopf},
    };
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed local/nonlocal eigenvalue laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    int threads = 0;  // 0 = take from config
    bool verbose = false;
    bool plot_data = false;

    for (const auto& [name, fn] : runners()) {
        CLI::App* sub = app.add_subcommand(name, name + " experiment");
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "row-level parallelism (overrides config)");
        sub->add_flag("--verbose", verbose, "per-row progress on stderr");
        sub->add_flag("--plot-data", plot_data, "emit per-figure plot CSVs");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string experiment = app.get_subcommands().front()->get_name();

    mixlap::ExperimentConfig cfg;
    try {
        std::ifstream is(config_path);
        if (!is) {
            std::fprintf(stderr, "error: cannot open config %s\n", config_path.c_str());
            return kExitConfig;
        }
        nlohmann::json j = nlohmann::json::parse(is);
        cfg = mixlap::parse_config(j, experiment);
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const mixlap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }
    if (threads > 0) cfg.threads = threads;
    if (plot_data) cfg.plot_data = true;

    try {
        mixlap::RunOutcome out = runners().at(experiment)(cfg, out_dir, verbose);
        std::printf("%s: %d rows -> %s (%s)\n", experiment.c_str(), out.rows,
                    out.csv_path.c_str(),
                    out.exit_code() == 0 ? "ok"
                    : out.exit_code() == 2 ? "hard assertion failed"
                                           : "solver failure");
        return out.exit_code();
    } catch (const mixlap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const mixlap::SolverFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
