// Times the serial reference exploration against the OpenMP driver on a
// desk-scale scenario and checks the results agree.

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "dpb/pipeline.hpp"
#include "dpb/rem.hpp"

int main(int argc, char** argv) {
    auto cfg = dpb::ExperimentConfig::desk_profile();
    if (argc > 1 && std::strcmp(argv[1], "--paper") == 0) {
        cfg = dpb::ExperimentConfig::paper_profile();
        cfg.n_drops = 8;  // a slice is enough for timing
    }

    const auto dep = dpb::deploy(cfg.deployment);
    const auto drops = dpb::generate_drops(cfg);
    std::printf("scenario: %d drops x %d UEs, %d patterns, %d/%d antennas\n", cfg.n_drops,
                cfg.n_ue, dep.n_patterns(), cfg.deployment.macro_antennas,
                cfg.deployment.pico_antennas);

    double t0 = omp_get_wtime();
    const auto serial = dpb::explore_drops_serial(dep, cfg.sim, drops);
    const double t_serial = omp_get_wtime() - t0;

    t0 = omp_get_wtime();
    const auto parallel = dpb::explore_drops_parallel(dep, cfg.sim, drops);
    const double t_parallel = omp_get_wtime() - t0;

    bool match = serial.size() == parallel.size();
    for (std::size_t i = 0; match && i < serial.size(); ++i) {
        const auto& a = serial.entries()[i];
        const auto& b = parallel.entries()[i];
        match = a.drop_id == b.drop_id && a.pattern == b.pattern && a.reward == b.reward &&
                a.cell_edge_bps == b.cell_edge_bps && a.mean_bps == b.mean_bps;
    }

    std::printf("serial:   %8.3f s\n", t_serial);
    std::printf("parallel: %8.3f s  (%d threads, speedup %.2fx)\n", t_parallel,
                omp_get_max_threads(), t_serial / t_parallel);
    std::printf("results %s\n", match ? "match" : "DIFFER");
    return match ? 0 : 1;
}
