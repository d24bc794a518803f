#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpb {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class BsKind { Macro, Pico };

struct BaseStation {
    int id = 0;  // 0 = MBS, 1..N = PBS
    Point position;
    int antennas = 1;
    double tx_power_dbm = 0.0;
    BsKind kind = BsKind::Macro;
};

// Muting pattern over the N pico BSs. Bit i-1 set means PBS i is active.
// The MBS sits outside the mask and is always active.
using MutingPattern = std::uint32_t;

inline bool bs_active(int bs_id, MutingPattern pattern) {
    if (bs_id == 0) return true;
    return (pattern >> (bs_id - 1)) & 1u;
}

inline MutingPattern all_active_pattern(int n_pbs) {
    return (1u << n_pbs) - 1u;
}

inline int active_count(MutingPattern pattern) {
    return __builtin_popcount(pattern);
}

// Shared tie rule for pattern argmax: higher value wins; at equal value
// prefer more active BSs, then the lower mask.
inline bool pattern_beats(double cand_val, MutingPattern cand,
                          double best_val, MutingPattern best) {
    if (cand_val != best_val) return cand_val > best_val;
    if (active_count(cand) != active_count(best))
        return active_count(cand) > active_count(best);
    return cand < best;
}

struct DeploymentConfig {
    int n_pbs = 5;
    int macro_antennas = 128;
    int pico_antennas = 16;
    double macro_power_dbm = 46.0;
    double pico_power_dbm = 30.0;
    double bandwidth_hz = 3.0e8;
    double carrier_hz = 3.5e9;
    double noise_figure_db = 9.0;
    double arena_half_width_m = 350.0;
    double ring_radius_m = 200.0;
};

struct Deployment {
    std::vector<BaseStation> bs;
    double bandwidth_hz = 3.0e8;
    double carrier_hz = 3.5e9;
    double noise_figure_db = 9.0;
    double arena_half_width_m = 350.0;

    int n_pbs() const { return static_cast<int>(bs.size()) - 1; }
    int n_patterns() const { return 1 << n_pbs(); }
    // Thermal noise over the full band plus receiver noise figure.
    double noise_power_w() const {
        const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }
};

// MBS at the origin, N PBSs on a ring at angles 360*k/N degrees.
inline Deployment deploy(const DeploymentConfig& cfg) {
    if (cfg.n_pbs < 1)
        throw std::invalid_argument("deploy: need at least one PBS, got " +
                                    std::to_string(cfg.n_pbs));
    Deployment d;
    d.bandwidth_hz = cfg.bandwidth_hz;
    d.carrier_hz = cfg.carrier_hz;
    d.noise_figure_db = cfg.noise_figure_db;
    d.arena_half_width_m = cfg.arena_half_width_m;
    d.bs.push_back({0, {0.0, 0.0}, cfg.macro_antennas, cfg.macro_power_dbm, BsKind::Macro});
    for (int k = 0; k < cfg.n_pbs; ++k) {
        const double angle = 2.0 * M_PI * k / cfg.n_pbs;
        Point p{cfg.ring_radius_m * std::cos(angle), cfg.ring_radius_m * std::sin(angle)};
        d.bs.push_back({k + 1, p, cfg.pico_antennas, cfg.pico_power_dbm, BsKind::Pico});
    }
    return d;
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace dpb
