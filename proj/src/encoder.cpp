#include "dpb/encoder.hpp"

#include <algorithm>
#include <stdexcept>

namespace dpb {

namespace {

int nearest_center(const Point& p, const std::vector<Point>& centers) {
    int best = 0;
    double best_d2 = -1.0;
    for (int k = 0; k < static_cast<int>(centers.size()); ++k) {
        const double dx = p.x - centers[k].x;
        const double dy = p.y - centers[k].y;
        const double d2 = dx * dx + dy * dy;
        if (best_d2 < 0.0 || d2 < best_d2) {  // strict: ties keep the lower index
            best_d2 = d2;
            best = k;
        }
    }
    return best;
}

}  // namespace

ClusterSummary kmeans_cluster(const std::vector<Point>& ue_positions,
                              const std::vector<Point>& bs_positions) {
    if (ue_positions.empty()) throw std::invalid_argument("kmeans_cluster: no UEs");
    if (bs_positions.empty()) throw std::invalid_argument("kmeans_cluster: no BS anchors");
    const int k = static_cast<int>(bs_positions.size());
    const int n = static_cast<int>(ue_positions.size());

    std::vector<Point> centers = bs_positions;
    std::vector<int> assignment(n, -1);

    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
            const int c = nearest_center(ue_positions[u], centers);
            if (c != assignment[u]) {
                assignment[u] = c;
                changed = true;
            }
        }
        if (!changed) break;

        // Members are sorted before accumulation so the centroid sum does
        // not depend on the order of the input UE list.
        std::vector<std::vector<Point>> members(k);
        for (int u = 0; u < n; ++u) members[assignment[u]].push_back(ue_positions[u]);
        for (int c = 0; c < k; ++c) {
            if (members[c].empty()) continue;  // empty cluster keeps its center
            std::sort(members[c].begin(), members[c].end(), [](const Point& a, const Point& b) {
                return a.x != b.x ? a.x < b.x : a.y < b.y;
            });
            double sx = 0.0, sy = 0.0;
            for (const auto& p : members[c]) {
                sx += p.x;
                sy += p.y;
            }
            centers[c] = {sx / members[c].size(), sy / members[c].size()};
        }
    }

    ClusterSummary summary;
    summary.centers = centers;
    summary.counts.assign(k, 0);
    for (int u = 0; u < n; ++u) ++summary.counts[assignment[u]];
    return summary;
}

StateVector encode_state(const ClusterSummary& summary, double arena_half_width, int n_ue) {
    StateVector state;
    state.reserve(3 * summary.centers.size());
    for (std::size_t c = 0; c < summary.centers.size(); ++c) {
        state.push_back(summary.centers[c].x / arena_half_width);
        state.push_back(summary.centers[c].y / arena_half_width);
        state.push_back(static_cast<double>(summary.counts[c]) / n_ue);
    }
    return state;
}

}  // namespace dpb
