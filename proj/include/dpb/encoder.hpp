#pragma once

#include <vector>

#include "dpb/deployment.hpp"

namespace dpb {

// Clusters keep the identity of the BS whose coordinates seeded them:
// cluster k always corresponds to BS k.
struct ClusterSummary {
    std::vector<Point> centers;
    std::vector<int> counts;
};

using StateVector = std::vector<double>;

// Lloyd iterations from BS-coordinate initialization, Euclidean distance,
// assignment ties to the lowest cluster index, empty clusters keep their
// previous center; stops when assignments stabilize or after 100 rounds.
ClusterSummary kmeans_cluster(const std::vector<Point>& ue_positions,
                              const std::vector<Point>& bs_positions);

// Flattened [x0,y0,c0, x1,y1,c1, ...]: coordinates normalized by arena
// half-width, counts by total UE count.
StateVector encode_state(const ClusterSummary& summary, double arena_half_width, int n_ue);

}  // namespace dpb
