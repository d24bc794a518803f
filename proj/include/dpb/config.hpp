#pragma once

#include <cstdint>
#include <string>

#include "dpb/deployment.hpp"
#include "dpb/netsim.hpp"

namespace dpb {

// Everything one experiment run needs. Defaults mirror the "paper"
// profile; the "desk" profile shrinks the scenario for fast runs.
struct ExperimentConfig {
    DeploymentConfig deployment;
    SimParams sim;

    int n_drops = 150;
    int n_ue = 50;
    std::uint64_t seed = 1;

    long train_steps = 50000;
    int batch_size = 8;

    std::string drops_path = "drops.txt";
    std::string rem_path = "rem.txt";
    std::string model_path = "model.txt";
    std::string report_dir = "reports";

    static ExperimentConfig paper_profile();
    static ExperimentConfig desk_profile();

    // Applies one "key = value" assignment; throws on unknown keys.
    void set_field(const std::string& key, const std::string& value);
};

// Parses a key-value config file (# comments, blank lines allowed) on top
// of the given base config.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);

}  // namespace dpb
