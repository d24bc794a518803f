#include "dpb/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dpb {

double ref_csi_objective(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                         MutingPattern pattern) {
    const ChannelModel model(sim.channel);
    const int n_ue = drop.n_ue();
    const int n_bs = static_cast<int>(dep.bs.size());
    const double noise_w = dep.noise_power_w();

    std::vector<std::vector<double>> rss_w(n_bs, std::vector<double>(n_ue, 0.0));
    for (int b = 0; b < n_bs; ++b)
        for (int u = 0; u < n_ue; ++u)
            rss_w[b][u] =
                dbm_to_watt(model.rss_dbm(dep.bs[b], drop.positions[u], u, drop.seed));

    const auto association = associate(dep, sim, drop, pattern);
    if (std::any_of(association.begin(), association.end(), [](int b) { return b < 0; }))
        return 0.0;

    std::vector<int> load(n_bs, 0);
    for (int u = 0; u < n_ue; ++u) ++load[association[u]];

    std::vector<double> proxy_rates(n_ue, 0.0);
    for (int u = 0; u < n_ue; ++u) {
        const int serving = association[u];
        double interference = 0.0;
        for (int b = 0; b < n_bs; ++b)
            if (b != serving && bs_active(b, pattern) && load[b] > 0)
                interference += rss_w[b][u];
        const double sinr = rss_w[serving][u] / (noise_w + interference);
        proxy_rates[u] = dep.bandwidth_hz / load[serving] * std::log2(1.0 + sinr);
    }
    return cell_edge_throughput(proxy_rates);
}

MutingPattern ref_csi(const Deployment& dep, const SimParams& sim, const UeDrop& drop) {
    MutingPattern best = 0;
    double best_obj = ref_csi_objective(dep, sim, drop, 0);
    for (int p = 1; p < dep.n_patterns(); ++p) {
        const auto pattern = static_cast<MutingPattern>(p);
        const double obj = ref_csi_objective(dep, sim, drop, pattern);
        if (pattern_beats(obj, pattern, best_obj, best)) {
            best = pattern;
            best_obj = obj;
        }
    }
    return best;
}

MutingPattern exhaustive_search(const Deployment& dep, const SimParams& sim, const UeDrop& drop) {
    MutingPattern best = 0;
    double best_reward = reward(evaluate_pattern(dep, sim, drop, 0), sim.reward_scale_bps);
    for (int p = 1; p < dep.n_patterns(); ++p) {
        const auto pattern = static_cast<MutingPattern>(p);
        const double r = reward(evaluate_pattern(dep, sim, drop, pattern), sim.reward_scale_bps);
        if (pattern_beats(r, pattern, best_reward, best)) {
            best = pattern;
            best_reward = r;
        }
    }
    return best;
}

}  // namespace dpb
