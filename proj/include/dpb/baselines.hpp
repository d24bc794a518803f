#pragma once

#include "dpb/netsim.hpp"
#include "dpb/rem.hpp"

namespace dpb {

// "No DPB": leave every BS on.
inline MutingPattern no_dpb(const Deployment& dep) {
    return all_active_pattern(dep.n_pbs());
}

// Scalar-CSI reference policy. Ranks patterns with a wideband RSS proxy:
// per UE, SINR = best active RSS / (noise + RSS of other active loaded
// BSs), rate = (B / users on serving BS) * log2(1 + SINR), objective =
// 10th percentile (0 on any disconnect). No precoding or scheduling, so
// it cannot see the M-MIMO spatial suppression of interference.
MutingPattern ref_csi(const Deployment& dep, const SimParams& sim, const UeDrop& drop);

// Proxy objective for one pattern; exposed for tests.
double ref_csi_objective(const Deployment& dep, const SimParams& sim, const UeDrop& drop,
                         MutingPattern pattern);

// Optimal oracle: evaluate all 2^N patterns with the full simulator.
MutingPattern exhaustive_search(const Deployment& dep, const SimParams& sim, const UeDrop& drop);

}  // namespace dpb
