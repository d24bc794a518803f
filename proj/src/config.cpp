#include "dpb/config.hpp"

#include <fstream>
#include <stdexcept>

#include "dpb/textio.hpp"

namespace dpb {

ExperimentConfig ExperimentConfig::paper_profile() {
    return ExperimentConfig{};
}

ExperimentConfig ExperimentConfig::desk_profile() {
    ExperimentConfig cfg;
    cfg.deployment.n_pbs = 3;
    cfg.deployment.macro_antennas = 8;
    cfg.deployment.pico_antennas = 4;
    cfg.n_drops = 30;
    cfg.n_ue = 20;
    cfg.train_steps = 2000;
    return cfg;
}

void ExperimentConfig::set_field(const std::string& key, const std::string& value) {
    const auto as_int = [&]() { return std::stoi(value); };
    const auto as_long = [&]() { return std::stol(value); };
    const auto as_u64 = [&]() { return static_cast<std::uint64_t>(std::stoull(value)); };
    const auto as_double = [&]() { return parse_double(value); };

    if (key == "n_pbs") deployment.n_pbs = as_int();
    else if (key == "macro_antennas") deployment.macro_antennas = as_int();
    else if (key == "pico_antennas") deployment.pico_antennas = as_int();
    else if (key == "macro_power_dbm") deployment.macro_power_dbm = as_double();
    else if (key == "pico_power_dbm") deployment.pico_power_dbm = as_double();
    else if (key == "bandwidth_hz") deployment.bandwidth_hz = as_double();
    else if (key == "carrier_hz") deployment.carrier_hz = as_double();
    else if (key == "noise_figure_db") deployment.noise_figure_db = as_double();
    else if (key == "arena_half_width_m") deployment.arena_half_width_m = as_double();
    else if (key == "ring_radius_m") deployment.ring_radius_m = as_double();
    else if (key == "shadow_sigma_db") sim.channel.shadow_sigma_db = as_double();
    else if (key == "corr_rho") sim.channel.corr_rho = as_double();
    else if (key == "min_rss_dbm") sim.min_rss_dbm = as_double();
    else if (key == "horizon_slots") sim.horizon_slots = as_int();
    else if (key == "max_group_size") sim.max_group_size = as_int();
    else if (key == "reward_scale_bps") sim.reward_scale_bps = as_double();
    else if (key == "n_drops") n_drops = as_int();
    else if (key == "n_ue") n_ue = as_int();
    else if (key == "seed") seed = as_u64();
    else if (key == "train_steps") train_steps = as_long();
    else if (key == "batch_size") batch_size = as_int();
    else if (key == "drops_path") drops_path = value;
    else if (key == "rem_path") rem_path = value;
    else if (key == "model_path") model_path = value;
    else if (key == "report_dir") report_dir = value;
    else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        try {
            base.set_field(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::exception& ex) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + ex.what());
        }
    }
    return base;
}

}  // namespace dpb
