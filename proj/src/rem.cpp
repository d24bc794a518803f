#include "dpb/rem.hpp"

#include <fstream>
#include <stdexcept>

#include "dpb/textio.hpp"

namespace dpb {

void RemStore::record(RemEntry entry) {
    const auto key = std::make_pair(entry.drop_id, entry.pattern);
    if (!keys_.insert(key).second)
        throw std::runtime_error("RemStore: duplicate entry for drop " +
                                 std::to_string(entry.drop_id) + ", pattern " +
                                 std::to_string(entry.pattern));
    entries_.push_back(std::move(entry));
}

MutingPattern RemStore::best_pattern(int drop_id, int n_pbs) const {
    const int n_patterns = 1 << n_pbs;
    std::vector<const RemEntry*> by_pattern(n_patterns, nullptr);
    int found = 0;
    for (const auto& e : entries_) {
        if (e.drop_id != drop_id) continue;
        if (by_pattern[e.pattern] == nullptr) ++found;
        by_pattern[e.pattern] = &e;
    }
    if (found != n_patterns)
        throw std::runtime_error("RemStore: drop " + std::to_string(drop_id) +
                                 " incomplete: " + std::to_string(found) + "/" +
                                 std::to_string(n_patterns) + " patterns");
    MutingPattern best = 0;
    double best_reward = by_pattern[0]->reward;
    for (MutingPattern p = 1; p < static_cast<MutingPattern>(n_patterns); ++p)
        if (pattern_beats(by_pattern[p]->reward, p, best_reward, best)) {
            best = p;
            best_reward = by_pattern[p]->reward;
        }
    return best;
}

void RemStore::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("RemStore: cannot write " + path);
    out << "remv1\n";
    for (const auto& e : entries_) {
        out << e.drop_id << ',' << e.pattern << ',' << format_double(e.reward) << ','
            << format_double(e.cell_edge_bps) << ',' << format_double(e.mean_bps) << ','
            << (e.all_connected ? 1 : 0);
        for (double v : e.state) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw std::runtime_error("RemStore: write failed on " + path);
}

RemStore RemStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RemStore: cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != "remv1")
        throw std::runtime_error("RemStore: " + path + ": missing remv1 header");

    RemStore store;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto at = [&](const std::string& what) {
            return "RemStore: " + path + ":" + std::to_string(line_no) + ": " + what;
        };
        const auto fields = split(line, ',');
        if (fields.size() < 7) throw std::runtime_error(at("truncated entry"));
        try {
            RemEntry e;
            e.drop_id = std::stoi(fields[0]);
            e.pattern = static_cast<MutingPattern>(std::stoul(fields[1]));
            e.reward = parse_double(fields[2]);
            e.cell_edge_bps = parse_double(fields[3]);
            e.mean_bps = parse_double(fields[4]);
            e.all_connected = fields[5] == "1";
            for (std::size_t i = 6; i < fields.size(); ++i)
                e.state.push_back(parse_double(fields[i]));
            store.record(std::move(e));
        } catch (const std::invalid_argument& ex) {
            throw std::runtime_error(at(ex.what()));
        }
    }
    return store;
}

StateVector drop_state(const Deployment& dep, const UeDrop& drop) {
    std::vector<Point> anchors;
    anchors.reserve(dep.bs.size());
    for (const auto& bs : dep.bs) anchors.push_back(bs.position);
    const auto summary = kmeans_cluster(drop.positions, anchors);
    return encode_state(summary, dep.arena_half_width_m, drop.n_ue());
}

std::vector<RemEntry> explore_all(const Deployment& dep, const SimParams& sim,
                                  const UeDrop& drop) {
    const auto state = drop_state(dep, drop);
    std::vector<RemEntry> entries(dep.n_patterns());
    for (int p = 0; p < dep.n_patterns(); ++p) {
        const auto result = evaluate_pattern(dep, sim, drop, static_cast<MutingPattern>(p));
        auto& e = entries[p];
        e.drop_id = drop.drop_id;
        e.state = state;
        e.pattern = static_cast<MutingPattern>(p);
        e.reward = reward(result, sim.reward_scale_bps);
        e.cell_edge_bps = result.cell_edge_tput;
        e.mean_bps = result.mean_tput;
        e.all_connected = result.all_connected;
    }
    return entries;
}

namespace {

// Entries land in preallocated (drop, pattern) slots, so the merge order
// is identical no matter how the work was scheduled.
RemStore explore_drops(const Deployment& dep, const SimParams& sim,
                       const std::vector<UeDrop>& drops, bool parallel) {
    const int n_drops = static_cast<int>(drops.size());
    const int n_patterns = dep.n_patterns();

    std::vector<StateVector> states(n_drops);
    for (int d = 0; d < n_drops; ++d) states[d] = drop_state(dep, drops[d]);

    std::vector<RemEntry> slots(static_cast<std::size_t>(n_drops) * n_patterns);
    const long total = static_cast<long>(n_drops) * n_patterns;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < total; ++i) {
        const int d = static_cast<int>(i / n_patterns);
        const auto pattern = static_cast<MutingPattern>(i % n_patterns);
        const auto result = evaluate_pattern(dep, sim, drops[d], pattern);
        auto& e = slots[i];
        e.drop_id = drops[d].drop_id;
        e.state = states[d];
        e.pattern = pattern;
        e.reward = reward(result, sim.reward_scale_bps);
        e.cell_edge_bps = result.cell_edge_tput;
        e.mean_bps = result.mean_tput;
        e.all_connected = result.all_connected;
    }

    RemStore store;
    for (auto& e : slots) store.record(std::move(e));
    return store;
}

}  // namespace

RemStore explore_drops_serial(const Deployment& dep, const SimParams& sim,
                              const std::vector<UeDrop>& drops) {
    return explore_drops(dep, sim, drops, false);
}

RemStore explore_drops_parallel(const Deployment& dep, const SimParams& sim,
                                const std::vector<UeDrop>& drops) {
    return explore_drops(dep, sim, drops, true);
}

}  // namespace dpb
