#pragma once

#include <cstdint>
#include <vector>

#include "dpb/deployment.hpp"
#include "dpb/radio.hpp"

namespace dpb {

// One spatial distribution of UEs.
struct UeDrop {
    int drop_id = 0;
    std::uint64_t seed = 0;
    std::vector<Point> positions;

    int n_ue() const { return static_cast<int>(positions.size()); }
};

struct EvalResult {
    std::vector<double> per_ue_throughput;  // bits/s, disconnected = 0
    double cell_edge_tput = 0.0;
    double mean_tput = 0.0;
    bool all_connected = false;
};

struct SimParams {
    ChannelModel::Params channel;
    double min_rss_dbm = -100.0;
    int horizon_slots = 100;
    double slot_duration_s = 1e-3;
    int max_group_size = 4;       // S = min(this, M, users on BS)
    double pf_time_constant = 20.0;
    double reward_scale_bps = 1e8;
};

// Uniform UE positions over the arena; the whole drop is redrawn (up to
// 100 attempts) until every UE clears min_rss_dbm from some BS under the
// all-active pattern.
UeDrop drop_ues(const Deployment& dep, const SimParams& sim, int n_ue, std::uint64_t seed,
                int drop_id = 0);

// Serving BS per UE (-1 = disconnected). Each UE attaches to the active
// BS with maximal RSS, ties to the lowest id.
std::vector<int> associate(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                           MutingPattern pattern);

// PF-scheduled MU-MIMO downlink over the horizon; per-UE throughput in bits/s.
std::vector<double> schedule_pf(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                                MutingPattern pattern, const std::vector<int>& association);

// Nearest-rank 10th percentile: sorted ascending, element ceil(0.1 n) - 1.
double cell_edge_throughput(const std::vector<double>& rates);

EvalResult evaluate_pattern(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                            MutingPattern pattern);

// 0 when any UE is disconnected, otherwise cell-edge scaled to O(1).
inline double reward(const EvalResult& result, double reward_scale_bps) {
    if (!result.all_connected) return 0.0;
    return result.cell_edge_tput / reward_scale_bps;
}

}  // namespace dpb
