#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "dpb/qnet.hpp"
#include "dpb/rng.hpp"

using namespace dpb;

namespace {

TrainSample random_sample(Rng& rng, int input_dim, int n_actions) {
    TrainSample s;
    for (int i = 0; i < input_dim; ++i) s.state.push_back(rng.uniform(-1.0, 1.0));
    s.action = static_cast<MutingPattern>(rng.next_below(n_actions));
    s.target = rng.next_double();
    return s;
}

bool nets_equal(const QNetwork& a, const QNetwork& b) {
    if (a.dims() != b.dims()) return false;
    for (std::size_t l = 0; l < a.weights.size(); ++l)
        if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
    return true;
}

}  // namespace

TEST_CASE("init is seeded, zero-biased, and counts parameters") {
    const std::vector<int> dims{18, 16, 64, 128, 64, 32};
    QNetwork a(dims, 42), b(dims, 42), c(dims, 43);
    CHECK(nets_equal(a, b));
    CHECK_FALSE(nets_equal(a, c));
    for (const auto& bias : a.biases) CHECK(bias.isZero(0.0));
    // 18*16+16 + 16*64+64 + 64*128+128 + 128*64+64 + 64*32+32
    CHECK(a.parameter_count() == 20048);
}

TEST_CASE("forward shapes and the zero network") {
    QNetwork net({3, 4, 32}, 1);
    for (auto& w : net.weights) w.setZero();
    const auto q = net.forward({0.5, -0.2, 0.1});
    REQUIRE(q.size() == 32);
    CHECK(q.isZero(0.0));
    CHECK_THROWS(net.forward({0.5, -0.2}));
}

TEST_CASE("hand-sized forward pass") {
    // dims 2 -> 2 -> 2, rectifier between
    QNetwork net({2, 2, 2}, 1);
    net.weights[0] << 1.0, -2.0, 0.5, 1.0;
    net.biases[0] << 0.5, -2.0;
    net.weights[1] << 2.0, 1.0, -1.0, 3.0;
    net.biases[1] << 0.0, 1.0;
    // input (1, 0.5): layer1 pre = (0.5, -1.0) -> relu (0.5, 0)
    // output = (2*0.5 + 0, -0.5 + 0 + 1) = (1.0, 0.5)
    const auto q = net.forward({1.0, 0.5});
    CHECK(q(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("zero-error batch gives zero loss and zero gradient") {
    QNetwork net({2, 3, 4}, 7);
    TrainSample s;
    s.state = {0.3, -0.4};
    s.action = 2;
    s.target = net.forward(s.state)(2);
    auto grads = net.zero_gradients();
    const double loss = net.accumulate_gradient(s, grads);
    CHECK(loss == 0.0);
    for (const auto& g : grads.weights) CHECK(g.isZero(0.0));
    for (const auto& g : grads.biases) CHECK(g.isZero(0.0));
}

TEST_CASE("non-taken actions get exactly zero output-layer gradient") {
    Rng rng(3);
    QNetwork net({4, 5, 8}, 9);
    const auto s = random_sample(rng, 4, 8);
    auto grads = net.zero_gradients();
    net.accumulate_gradient(s, grads);
    const auto& out_w = grads.weights.back();
    const auto& out_b = grads.biases.back();
    for (int a = 0; a < 8; ++a) {
        if (a == static_cast<int>(s.action)) continue;
        CHECK(out_w.row(a).isZero(0.0));
        CHECK(out_b(a) == 0.0);
    }
}

TEST_CASE("single-parameter adam step matches the closed form") {
    // Net: 1 -> 1, identity output. q = w*x + b, sample (x=2, target=1).
    QNetwork net({1, 1}, 1);
    net.weights[0](0, 0) = 0.5;
    net.biases[0](0) = 0.0;
    AdamState opt = AdamState::init_for(net);

    TrainSample s;
    s.state = {2.0};
    s.action = 0;
    s.target = 1.0;
    const double loss = train_step(net, {s}, opt);
    CHECK(loss == doctest::Approx(0.0).epsilon(1e-15));  // q = 1 exactly: loss 0

    // Move the target so the gradient is nonzero: q = 1, target 2,
    // dL/dw = 2*(q-t)*x = -4, dL/db = -2. First Adam step moves each
    // parameter by +step_size regardless of gradient scale.
    s.target = 2.0;
    const double w_before = net.weights[0](0, 0);
    const double b_before = net.biases[0](0);
    train_step(net, {s}, opt);
    const double g_w = -4.0, g_b = -2.0;
    const auto adam_delta = [&](double g, double m, double v, long t) {
        m = opt.beta1 * m + (1 - opt.beta1) * g;
        v = opt.beta2 * v + (1 - opt.beta2) * g * g;
        const double mhat = m / (1 - std::pow(opt.beta1, t));
        const double vhat = v / (1 - std::pow(opt.beta2, t));
        return -opt.step_size * mhat / (std::sqrt(vhat) + opt.epsilon);
    };
    // t=2 overall, but m and v were zero after the zero-gradient first step
    CHECK(net.weights[0](0, 0) - w_before ==
          doctest::Approx(adam_delta(g_w, 0.0, 0.0, 2)).epsilon(1e-12));
    CHECK(net.biases[0](0) - b_before ==
          doctest::Approx(adam_delta(g_b, 0.0, 0.0, 2)).epsilon(1e-12));
}

TEST_CASE("loss is nonnegative and empty batches are rejected") {
    Rng rng(5);
    QNetwork net({4, 6, 4}, 11);
    AdamState opt = AdamState::init_for(net);
    for (int i = 0; i < 20; ++i) {
        const auto s = random_sample(rng, 4, 4);
        CHECK(train_step(net, {s}, opt) >= 0.0);
    }
    CHECK_THROWS(train_step(net, {}, opt));
}

TEST_CASE("act_greedy argmax, ties, and monotone invariance") {
    QNetwork net({2, 32}, 1);

    // unique max at index 7
    net.weights[0].setZero();
    net.biases[0].setZero();
    net.biases[0](7) = 1.0;
    CHECK(act_greedy(net, {0.0, 0.0}) == 7);

    // all-equal q: the all-active mask (most active BSs) wins
    net.biases[0].setConstant(0.25);
    net.biases[0](7) = 0.25;
    CHECK(act_greedy(net, {0.0, 0.0}) == 31);

    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        for (int a = 0; a < 32; ++a) net.biases[0](a) = rng.uniform(-2.0, 2.0);
        const auto q = net.forward({0.0, 0.0});
        MutingPattern best = 0;
        for (int a = 1; a < 32; ++a)
            if (pattern_beats(q(a), static_cast<MutingPattern>(a), q(best), best))
                best = static_cast<MutingPattern>(a);
        CHECK(act_greedy(net, {0.0, 0.0}) == best);

        // strictly increasing transform of q preserves the choice
        QNetwork scaled = net;
        scaled.biases[0] = 3.0 * net.biases[0].array() + 0.7;
        CHECK(act_greedy(scaled, {0.0, 0.0}) == best);
    }
}

TEST_CASE("gradient check on down-sized nets") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        QNetwork net({4, 3, 3, 4}, rng.next_u64());
        const auto s = random_sample(rng, 4, 4);
        CHECK(grad_check(net, s) < 1e-4);
    }
    CHECK_THROWS(grad_check(QNetwork({4, 3, 3, 4}, 1), random_sample(rng, 4, 4), 0.0));
}

TEST_CASE("grad check at a zero-loss point stays quiet") {
    Rng rng(19);
    QNetwork net({4, 3, 3, 4}, 23);
    TrainSample s = random_sample(rng, 4, 4);
    s.target = net.forward(s.state)(s.action);
    CHECK(grad_check(net, s) < 1e-6);
}

TEST_CASE("training on a synthetic store reduces loss and is reproducible") {
    Rng rng(29);
    RemStore rem;
    // targets follow a fixed smooth function of state so the net can fit
    for (int d = 0; d < 40; ++d)
        for (MutingPattern p = 0; p < 4; ++p) {
            RemEntry e;
            e.drop_id = d;
            e.pattern = p;
            for (int i = 0; i < 6; ++i) e.state.push_back(rng.uniform(-1.0, 1.0));
            e.reward = 0.5 + 0.3 * e.state[0] - 0.2 * e.state[1] + 0.1 * p;
            e.all_connected = true;
            rem.record(std::move(e));
        }

    QNetwork net({6, 8, 8, 4}, 31);
    const auto trace = train(net, rem, 2000, 8, 99).loss_trace;
    REQUIRE(trace.size() == 20);
    CHECK(trace.front().first == 100);
    CHECK(trace.back().first == 2000);
    double early = 0.0, late = 0.0;
    for (int i = 0; i < 5; ++i) {
        early += trace[i].second;
        late += trace[trace.size() - 1 - i].second;
    }
    CHECK(late < early);

    QNetwork net2({6, 8, 8, 4}, 31);
    train(net2, rem, 2000, 8, 99);
    CHECK(nets_equal(net, net2));

    QNetwork untouched({6, 8, 8, 4}, 31);
    QNetwork frozen = untouched;
    train(untouched, rem, 0, 8, 99);
    CHECK(nets_equal(untouched, frozen));
}

TEST_CASE("model save/load round-trips exactly") {
    namespace fs = std::filesystem;
    const auto path =
        (fs::temp_directory_path() / ("qnet_" + std::to_string(std::random_device{}()))).string();
    QNetwork net({5, 7, 6, 8}, 12345);
    net.save(path);
    const auto loaded = QNetwork::load(path);
    CHECK(nets_equal(net, loaded));
    fs::remove(path);
    CHECK_THROWS(QNetwork::load(path));
}
