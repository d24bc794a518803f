#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dpb/deployment.hpp"
#include "dpb/encoder.hpp"
#include "dpb/netsim.hpp"

namespace dpb {

struct RemEntry {
    int drop_id = 0;
    StateVector state;
    MutingPattern pattern = 0;
    double reward = 0.0;
    double cell_edge_bps = 0.0;
    double mean_bps = 0.0;
    bool all_connected = false;
};

// Storage half of the REM: (state, pattern -> throughput) experience.
class RemStore {
public:
    void record(RemEntry entry);

    const std::vector<RemEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    // Reward-maximizing pattern for one fully-explored drop; requires all
    // 2^N entries present.
    MutingPattern best_pattern(int drop_id, int n_pbs) const;

    void save(const std::string& path) const;
    static RemStore load(const std::string& path);

private:
    std::vector<RemEntry> entries_;
    std::set<std::pair<int, MutingPattern>> keys_;
};

// Evaluates every muting pattern of one drop; all entries share the
// drop's encoded state.
std::vector<RemEntry> explore_all(const Deployment& dep, const SimParams& sim,
                                  const UeDrop& drop);

// Exploration over many drops. The parallel driver fans out over
// (drop, pattern) with OpenMP; the serial one is the reference kept for
// testing and produces identical entries in identical order.
RemStore explore_drops_serial(const Deployment& dep, const SimParams& sim,
                              const std::vector<UeDrop>& drops);
RemStore explore_drops_parallel(const Deployment& dep, const SimParams& sim,
                                const std::vector<UeDrop>& drops);

StateVector drop_state(const Deployment& dep, const UeDrop& drop);

}  // namespace dpb
