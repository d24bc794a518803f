#pragma once

#include <string>
#include <vector>

#include "dpb/config.hpp"
#include "dpb/netsim.hpp"
#include "dpb/rem.hpp"

namespace dpb {

// Drops file ("dropsv1"): one line per drop with id, seed and positions.
void save_drops(const std::vector<UeDrop>& drops, const std::string& path);
std::vector<UeDrop> load_drops(const std::string& path);

std::vector<UeDrop> generate_drops(const ExperimentConfig& cfg);

// Per-drop evaluation of the four compared policies.
struct AlgoResult {
    std::string algorithm;
    MutingPattern pattern = 0;
    double cell_edge_bps = 0.0;
    double mean_bps = 0.0;
    double reward = 0.0;
};
struct DropReport {
    int drop_id = 0;
    std::vector<AlgoResult> algos;  // order: no_dpb, ref, es, dqn
};

// Subcommand bodies; each writes the files named in cfg.
void cmd_drops(const ExperimentConfig& cfg);
void cmd_explore(const ExperimentConfig& cfg, bool parallel = true);
void cmd_train(const ExperimentConfig& cfg);
std::vector<DropReport> cmd_evaluate(const ExperimentConfig& cfg, bool parallel = true);
// Regenerates cdf.csv and summary.csv from an existing evaluation.csv.
void cmd_report(const ExperimentConfig& cfg);

std::vector<DropReport> load_evaluation_table(const std::string& path);
void write_reports(const std::vector<DropReport>& reports, const std::string& report_dir);

}  // namespace dpb
