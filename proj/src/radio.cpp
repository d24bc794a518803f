#include "dpb/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpb {

namespace {

constexpr std::uint64_t kShadowSalt = 0x5d4a5u;
constexpr std::uint64_t kFadingSalt = 0xfade5u;

std::uint64_t link_seed(std::uint64_t salt, int bs_id, int ue_id, std::uint64_t drop_seed) {
    return mix64(mix64(drop_seed, salt),
                 (static_cast<std::uint64_t>(bs_id + 1) << 32) |
                     static_cast<std::uint64_t>(ue_id + 1));
}

}  // namespace

double ChannelModel::path_loss_db(const BaseStation& bs, const Point& ue_pos) const {
    const double d = std::max(1.0, distance(bs.position, ue_pos));
    const bool macro = bs.kind == BsKind::Macro;
    const double pl0 = macro ? params_.macro_pl0_db : params_.pico_pl0_db;
    const double n = macro ? params_.macro_exponent : params_.pico_exponent;
    return pl0 + 10.0 * n * std::log10(d);
}

double ChannelModel::shadow_db(int bs_id, int ue_id, std::uint64_t drop_seed) const {
    Rng rng(link_seed(kShadowSalt, bs_id, ue_id, drop_seed));
    return params_.shadow_sigma_db * rng.normal();
}

double ChannelModel::rss_dbm(const BaseStation& bs, const Point& ue_pos, int ue_id,
                             std::uint64_t drop_seed) const {
    return bs.tx_power_dbm - path_loss_db(bs, ue_pos) - shadow_db(bs.id, ue_id, drop_seed);
}

LinkBudget ChannelModel::link_budget(const BaseStation& bs, const Point& ue_pos, int ue_id,
                                     std::uint64_t drop_seed) const {
    LinkBudget lb;
    lb.tx_power_dbm = bs.tx_power_dbm;
    lb.pl_db = path_loss_db(bs, ue_pos);
    lb.shadow_db = shadow_db(bs.id, ue_id, drop_seed);
    lb.rss_dbm = lb.tx_power_dbm - lb.pl_db - lb.shadow_db;
    return lb;
}

ChannelVector ChannelModel::gen_channel(const BaseStation& bs, const Point& ue_pos, int ue_id,
                                        std::uint64_t drop_seed) const {
    const int m = bs.antennas;
    const double pl = path_loss_db(bs, ue_pos);
    const double shadow = shadow_db(bs.id, ue_id, drop_seed);
    const double amp = std::sqrt(db_to_linear(-(pl + shadow)));

    Rng rng(link_seed(kFadingSalt, bs.id, ue_id, drop_seed));
    Eigen::VectorXcd g(m);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < m; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        g(i) = std::complex<double>(re * inv_sqrt2, im * inv_sqrt2);
    }

    // The Cholesky factor of the exponential correlation matrix has the
    // closed form L[i][0] = rho^i, L[i][j] = rho^(i-j) * sqrt(1 - rho^2)
    // for 0 < j <= i, so applying it is O(M) per row via a running sum.
    const double rho = params_.corr_rho;
    ChannelVector h(m);
    if (rho == 0.0) {
        for (int i = 0; i < m; ++i) h(i) = amp * g(i);
        return h;
    }
    const double tail = std::sqrt(1.0 - rho * rho);
    // acc_i = sum_{j<=i} L[i][j] g_j satisfies acc_i = rho * acc_{i-1} + tail * g_i
    // except the j = 0 column, which carries weight rho^i instead of
    // rho^i * tail; the recurrence below absorbs that by seeding with g_0.
    std::complex<double> acc = g(0);
    h(0) = amp * acc;
    for (int i = 1; i < m; ++i) {
        acc = rho * acc + tail * g(i);
        h(i) = amp * acc;
    }
    return h;
}

PrecodeGroup rzf_precode(const Eigen::MatrixXcd& channels, const std::vector<int>& users,
                         double per_bs_power_w, double noise_power_w) {
    const int m = static_cast<int>(channels.rows());
    const int s = static_cast<int>(channels.cols());
    if (s < 1 || m < s) throw std::invalid_argument("rzf_precode: need 1 <= S <= M");
    if (static_cast<int>(users.size()) != s)
        throw std::invalid_argument("rzf_precode: users/channels size mismatch");
    if (!channels.allFinite() || !std::isfinite(per_bs_power_w) || !std::isfinite(noise_power_w))
        throw std::invalid_argument("rzf_precode: non-finite input");

    const double alpha = s * noise_power_w / per_bs_power_w;
    Eigen::MatrixXcd gram = channels.adjoint() * channels;
    gram.diagonal().array() += alpha;
    Eigen::MatrixXcd w = channels * gram.llt().solve(Eigen::MatrixXcd::Identity(s, s));

    PrecodeGroup group;
    group.users = users;
    group.per_bs_power_w = per_bs_power_w;
    group.per_user_power_w = per_bs_power_w / s;
    for (int c = 0; c < s; ++c) w.col(c).normalize();
    group.precoders = std::move(w);
    return group;
}

double compute_sinr(int target_idx, const ChannelVector& serving_channel,
                    const PrecodeGroup& serving_group,
                    const std::vector<InterferingGroup>& interferers,
                    double noise_power_w) {
    const auto beam_power = [](const ChannelVector& h, const Eigen::MatrixXcd& w, int col) {
        return std::norm(h.dot(w.col(col)));
    };
    const int s = static_cast<int>(serving_group.precoders.cols());
    const double signal =
        serving_group.per_user_power_w * beam_power(serving_channel, serving_group.precoders, target_idx);
    double interference = 0.0;
    for (int c = 0; c < s; ++c) {
        if (c == target_idx) continue;
        interference +=
            serving_group.per_user_power_w * beam_power(serving_channel, serving_group.precoders, c);
    }
    for (const auto& inter : interferers) {
        const auto& grp = *inter.group;
        for (int c = 0; c < static_cast<int>(grp.precoders.cols()); ++c)
            interference += grp.per_user_power_w * beam_power(*inter.channel_to_ue, grp.precoders, c);
    }
    return signal / (interference + noise_power_w);
}

}  // namespace dpb
