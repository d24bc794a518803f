#include "dpb/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpb {

UeDrop drop_ues(const Deployment& dep, const SimParams& sim, int n_ue, std::uint64_t seed,
                int drop_id) {
    if (n_ue < 1) throw std::invalid_argument("drop_ues: n_ue must be >= 1");
    const ChannelModel model(sim.channel);
    const double hw = dep.arena_half_width_m;

    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng(mix64(seed, static_cast<std::uint64_t>(attempt)));
        UeDrop drop;
        drop.drop_id = drop_id;
        drop.seed = seed;
        drop.positions.reserve(n_ue);
        for (int u = 0; u < n_ue; ++u)
            drop.positions.push_back({rng.uniform(-hw, hw), rng.uniform(-hw, hw)});

        bool covered = true;
        for (int u = 0; u < n_ue && covered; ++u) {
            double best = -1e300;
            for (const auto& bs : dep.bs)
                best = std::max(best, model.rss_dbm(bs, drop.positions[u], u, seed));
            covered = best >= sim.min_rss_dbm;
        }
        if (covered) return drop;
    }
    throw std::runtime_error(
        "drop_ues: coverage threshold unattainable after 100 redraws; "
        "check tx powers / min_rss_dbm");
}

std::vector<int> associate(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                           MutingPattern pattern) {
    const ChannelModel model(sim.channel);
    std::vector<int> serving(drop.n_ue(), -1);
    for (int u = 0; u < drop.n_ue(); ++u) {
        double best_rss = -1e300;
        int best_bs = -1;
        for (const auto& bs : dep.bs) {
            if (!bs_active(bs.id, pattern)) continue;
            const double rss = model.rss_dbm(bs, drop.positions[u], u, drop.seed);
            if (rss > best_rss) {  // strict: ties keep the lower id
                best_rss = rss;
                best_bs = bs.id;
            }
        }
        serving[u] = best_rss >= sim.min_rss_dbm ? best_bs : -1;
    }
    return serving;
}

std::vector<double> schedule_pf(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                                MutingPattern pattern, const std::vector<int>& association) {
    const ChannelModel model(sim.channel);
    const int n_ue = drop.n_ue();
    const int n_bs = static_cast<int>(dep.bs.size());
    const double noise_w = dep.noise_power_w();

    // Channels are static over the horizon: generate each (bs, ue) link once.
    std::vector<std::vector<ChannelVector>> channels(n_bs);
    for (int b = 0; b < n_bs; ++b) {
        channels[b].resize(n_ue);
        for (int u = 0; u < n_ue; ++u)
            channels[b][u] = model.gen_channel(dep.bs[b], drop.positions[u], u, drop.seed);
    }

    std::vector<std::vector<int>> users_of_bs(n_bs);
    for (int u = 0; u < n_ue; ++u)
        if (association[u] >= 0) users_of_bs[association[u]].push_back(u);

    // Single-user full-power estimate drives the PF metric numerator.
    std::vector<double> inst_rate(n_ue, 0.0);
    for (int u = 0; u < n_ue; ++u) {
        const int b = association[u];
        if (b < 0) continue;
        const double p = dbm_to_watt(dep.bs[b].tx_power_dbm);
        inst_rate[u] = shannon_rate(p * channels[b][u].squaredNorm() / noise_w, dep.bandwidth_hz);
    }

    std::vector<double> avg_rate(n_ue, 1.0);  // bits/s, PF average
    std::vector<double> bits(n_ue, 0.0);
    const double beta = 1.0 / sim.pf_time_constant;

    std::vector<PrecodeGroup> groups(n_bs);
    std::vector<char> bs_transmits(n_bs, 0);
    std::vector<int> picked;

    for (int slot = 0; slot < sim.horizon_slots; ++slot) {
        // Select each BS's group by PF metric, then precode.
        for (int b = 0; b < n_bs; ++b) {
            bs_transmits[b] = 0;
            if (!bs_active(b, pattern)) continue;
            const auto& cand = users_of_bs[b];
            if (cand.empty()) continue;  // user-less BS stays silent
            const int s = std::min({sim.max_group_size, dep.bs[b].antennas,
                                    static_cast<int>(cand.size())});
            picked = cand;
            std::stable_sort(picked.begin(), picked.end(), [&](int a, int c) {
                return inst_rate[a] / avg_rate[a] > inst_rate[c] / avg_rate[c];
            });
            picked.resize(s);
            Eigen::MatrixXcd h(dep.bs[b].antennas, s);
            for (int c = 0; c < s; ++c) h.col(c) = channels[b][picked[c]];
            groups[b] = rzf_precode(h, picked, dbm_to_watt(dep.bs[b].tx_power_dbm), noise_w);
            bs_transmits[b] = 1;
        }

        std::vector<double> slot_rate(n_ue, 0.0);
        for (int b = 0; b < n_bs; ++b) {
            if (!bs_transmits[b]) continue;
            std::vector<InterferingGroup> interferers;
            for (int c = 0; c < static_cast<int>(groups[b].users.size()); ++c) {
                const int u = groups[b].users[c];
                interferers.clear();
                for (int ob = 0; ob < n_bs; ++ob)
                    if (ob != b && bs_transmits[ob])
                        interferers.push_back({&channels[ob][u], &groups[ob]});
                const double sinr =
                    compute_sinr(c, channels[b][u], groups[b], interferers, noise_w);
                slot_rate[u] = shannon_rate(sinr, dep.bandwidth_hz);
                bits[u] += slot_rate[u] * sim.slot_duration_s;
            }
        }

        for (int u = 0; u < n_ue; ++u)
            if (association[u] >= 0)
                avg_rate[u] = (1.0 - beta) * avg_rate[u] + beta * slot_rate[u];
    }

    const double total_time = sim.horizon_slots * sim.slot_duration_s;
    std::vector<double> throughput(n_ue, 0.0);
    for (int u = 0; u < n_ue; ++u) throughput[u] = bits[u] / total_time;
    return throughput;
}

double cell_edge_throughput(const std::vector<double>& rates) {
    if (rates.empty()) throw std::invalid_argument("cell_edge_throughput: empty rate list");
    std::vector<double> sorted(rates);
    std::sort(sorted.begin(), sorted.end());
    // ceil(0.1 * n) in exact integer arithmetic
    const std::size_t idx = (sorted.size() + 9) / 10 - 1;
    return sorted[idx];
}

EvalResult evaluate_pattern(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                            MutingPattern pattern) {
    const auto association = associate(dep, sim, drop, pattern);
    EvalResult result;
    result.all_connected =
        std::none_of(association.begin(), association.end(), [](int b) { return b < 0; });
    result.per_ue_throughput = schedule_pf(dep, sim, drop, pattern, association);
    result.cell_edge_tput = cell_edge_throughput(result.per_ue_throughput);
    result.mean_tput =
        std::accumulate(result.per_ue_throughput.begin(), result.per_ue_throughput.end(), 0.0) /
        result.per_ue_throughput.size();
    return result;
}

}  // namespace dpb
