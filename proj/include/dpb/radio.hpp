#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dpb/deployment.hpp"
#include "dpb/rng.hpp"

namespace dpb {

using ChannelVector = Eigen::VectorXcd;

struct LinkBudget {
    double tx_power_dbm = 0.0;
    double pl_db = 0.0;
    double shadow_db = 0.0;
    double rss_dbm = 0.0;
};

// One BS's co-scheduled user group: unit-norm precoder columns and an
// equal per-user power split.
struct PrecodeGroup {
    std::vector<int> users;        // UE ids, one per precoder column
    Eigen::MatrixXcd precoders;    // M x S, unit-norm columns
    double per_user_power_w = 0.0;
    double per_bs_power_w = 0.0;
};

// Log-distance path loss + log-normal shadowing + exponentially
// correlated Rayleigh fading, all reproducible from (bs, ue, drop seed).
class ChannelModel {
public:
    struct Params {
        double macro_pl0_db = 34.0;
        double macro_exponent = 3.5;
        double pico_pl0_db = 38.0;
        double pico_exponent = 3.0;
        double shadow_sigma_db = 6.0;
        double corr_rho = 0.5;
    };

    ChannelModel() = default;
    explicit ChannelModel(Params p) : params_(p) {}
    const Params& params() const { return params_; }

    // PL(d) = PL0 + 10*n*log10(d / 1m), distance clamped to 1 m.
    double path_loss_db(const BaseStation& bs, const Point& ue_pos) const;

    // Log-normal shadowing in dB, frozen per (bs, ue, drop).
    double shadow_db(int bs_id, int ue_id, std::uint64_t drop_seed) const;

    double rss_dbm(const BaseStation& bs, const Point& ue_pos, int ue_id,
                   std::uint64_t drop_seed) const;

    LinkBudget link_budget(const BaseStation& bs, const Point& ue_pos, int ue_id,
                           std::uint64_t drop_seed) const;

    // h = sqrt(linear(-PL-shadow)) * L g, with g i.i.d. CN(0,1) and L the
    // Cholesky factor of R[i][j] = rho^|i-j|.
    ChannelVector gen_channel(const BaseStation& bs, const Point& ue_pos, int ue_id,
                              std::uint64_t drop_seed) const;

private:
    Params params_;
};

// W = H (H^H H + alpha I)^-1 with alpha = S * noise / P, columns
// normalized to unit norm; power split equally across users.
PrecodeGroup rzf_precode(const Eigen::MatrixXcd& channels, const std::vector<int>& users,
                         double per_bs_power_w, double noise_power_w);

// Interference seen by one UE from another BS's concurrent group.
struct InterferingGroup {
    const ChannelVector* channel_to_ue;  // target UE's channel to that BS
    const PrecodeGroup* group;
};

double compute_sinr(int target_idx, const ChannelVector& serving_channel,
                    const PrecodeGroup& serving_group,
                    const std::vector<InterferingGroup>& interferers,
                    double noise_power_w);

inline double shannon_rate(double sinr, double bandwidth_hz) {
    return bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace dpb
