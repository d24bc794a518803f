// Experiment harness: drop generation, REM exploration, DQN training,
// four-way evaluation and report regeneration.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "dpb/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string profile = "paper";
    std::vector<std::string> overrides;  // key=value
    bool has_seed = false;
    std::uint64_t seed = 0;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option("--profile", opts.profile, "base profile")
        ->check(CLI::IsMember({"paper", "desk"}));
    cmd->add_option("--seed", opts.seed, "master RNG seed")
        ->each([&opts](const std::string&) { opts.has_seed = true; });
    cmd->add_option("--set", opts.overrides, "config override, key=value (repeatable)");
    cmd->add_flag("--serial", opts.serial, "disable OpenMP fan-out");
}

dpb::ExperimentConfig build_config(const CommonOpts& opts) {
    auto cfg = opts.profile == "desk" ? dpb::ExperimentConfig::desk_profile()
                                      : dpb::ExperimentConfig::paper_profile();
    if (!opts.config_path.empty()) cfg = dpb::load_config(opts.config_path, cfg);
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got: " + kv);
        cfg.set_field(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opts.has_seed) cfg.seed = opts.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic point blanking simulator: REM exploration and DQN muting control"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* drops = app.add_subcommand("drops", "generate UE drops");
    auto* explore = app.add_subcommand("explore", "evaluate every muting pattern into the REM");
    auto* train = app.add_subcommand("train", "train the Q-network on the REM");
    auto* evaluate = app.add_subcommand("evaluate", "run the four policies and write reports");
    auto* report = app.add_subcommand("report", "regenerate cdf/summary from evaluation.csv");
    for (auto* cmd : {drops, explore, train, evaluate, report}) add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = build_config(opts);
        if (drops->parsed()) {
            dpb::cmd_drops(cfg);
            std::cout << "wrote " << cfg.n_drops << " drops to " << cfg.drops_path << "\n";
        } else if (explore->parsed()) {
            dpb::cmd_explore(cfg, !opts.serial);
            std::cout << "wrote REM to " << cfg.rem_path << "\n";
        } else if (train->parsed()) {
            dpb::cmd_train(cfg);
            std::cout << "wrote model to " << cfg.model_path << "\n";
        } else if (evaluate->parsed()) {
            dpb::cmd_evaluate(cfg, !opts.serial);
            std::cout << "wrote reports to " << cfg.report_dir << "\n";
        } else if (report->parsed()) {
            dpb::cmd_report(cfg);
            std::cout << "regenerated reports in " << cfg.report_dir << "\n";
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
