#include "dpb/qnet.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dpb/rng.hpp"
#include "dpb/textio.hpp"

namespace dpb {

QNetwork::QNetwork(std::vector<int> dims, std::uint64_t seed) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("QNetwork: need at least two dims");
    for (int d : dims_)
        if (d < 1) throw std::invalid_argument("QNetwork: layer dims must be positive");
    Rng rng(mix64(seed, 0x71e7u));
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        const int fan_in = dims_[l];
        const int fan_out = dims_[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r)
            for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-bound, bound);
        weights.push_back(std::move(w));
        biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
}

std::size_t QNetwork::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        n += static_cast<std::size_t>(weights[l].size()) + biases[l].size();
    return n;
}

Eigen::VectorXd QNetwork::forward(const StateVector& state) const {
    if (static_cast<int>(state.size()) != input_dim())
        throw std::invalid_argument("QNetwork::forward: state length " +
                                    std::to_string(state.size()) + " != input dim " +
                                    std::to_string(input_dim()));
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(state.data(), state.size());
    for (std::size_t l = 0; l < weights.size(); ++l) {
        a = weights[l] * a + biases[l];
        if (l + 1 < weights.size()) a = a.cwiseMax(0.0);
    }
    return a;
}

void QNetwork::Gradients::set_zero() {
    for (auto& w : weights) w.setZero();
    for (auto& b : biases) b.setZero();
}

QNetwork::Gradients QNetwork::zero_gradients() const {
    Gradients g;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        g.weights.push_back(Eigen::MatrixXd::Zero(weights[l].rows(), weights[l].cols()));
        g.biases.push_back(Eigen::VectorXd::Zero(biases[l].size()));
    }
    return g;
}

double QNetwork::accumulate_gradient(const TrainSample& sample, Gradients& grads) const {
    if (static_cast<int>(sample.action) >= output_dim())
        throw std::invalid_argument("QNetwork: action out of range");

    // Forward pass keeping pre-activation inputs of every layer.
    std::vector<Eigen::VectorXd> inputs;  // activation entering layer l
    Eigen::VectorXd a =
        Eigen::Map<const Eigen::VectorXd>(sample.state.data(), sample.state.size());
    for (std::size_t l = 0; l < weights.size(); ++l) {
        inputs.push_back(a);
        a = weights[l] * a + biases[l];
        if (l + 1 < weights.size()) a = a.cwiseMax(0.0);
    }

    const double err = a(sample.action) - sample.target;

    // Only the taken action's output carries loss.
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(output_dim());
    delta(sample.action) = 2.0 * err;
    for (std::size_t l = weights.size(); l-- > 0;) {
        grads.weights[l] += delta * inputs[l].transpose();
        grads.biases[l] += delta;
        if (l > 0) {
            delta = weights[l].transpose() * delta;
            // Rectifier mask: inputs[l] is already the rectified output of
            // layer l-1, so positive entries mark active units.
            for (Eigen::Index i = 0; i < delta.size(); ++i)
                if (inputs[l](i) <= 0.0) delta(i) = 0.0;
        }
    }
    return err * err;
}

AdamState AdamState::init_for(const QNetwork& net) {
    AdamState s;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        s.m_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        s.v_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
        s.m_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
        s.v_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    }
    return s;
}

double train_step(QNetwork& net, const std::vector<TrainSample>& batch, AdamState& opt) {
    if (batch.empty()) throw std::invalid_argument("train_step: empty batch");

    auto grads = net.zero_gradients();
    double loss = 0.0;
    for (const auto& sample : batch) loss += net.accumulate_gradient(sample, grads);
    const double inv_b = 1.0 / batch.size();
    loss *= inv_b;
    if (!std::isfinite(loss)) throw std::runtime_error("train_step: training diverged");

    ++opt.t;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.t));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.t));
    const auto adam = [&](auto& param, auto& grad, auto& m, auto& v) {
        grad *= inv_b;
        m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
        v = opt.beta2 * v + (1.0 - opt.beta2) * grad.cwiseProduct(grad);
        param.array() -=
            opt.step_size * (m.array() / bc1) / ((v.array() / bc2).sqrt() + opt.epsilon);
    };
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        adam(net.weights[l], grads.weights[l], opt.m_w[l], opt.v_w[l]);
        adam(net.biases[l], grads.biases[l], opt.m_b[l], opt.v_b[l]);
    }
    for (std::size_t l = 0; l < net.weights.size(); ++l)
        if (!net.weights[l].allFinite() || !net.biases[l].allFinite())
            throw std::runtime_error("train_step: parameters went non-finite");
    return loss;
}

TrainResult train(QNetwork& net, const RemStore& rem, long steps, int batch_size,
                  std::uint64_t seed) {
    if (rem.size() == 0) throw std::invalid_argument("train: REM store is empty");
    const auto& entries = rem.entries();
    Rng rng(mix64(seed, 0x7124u));
    auto opt = AdamState::init_for(net);

    TrainResult result;
    std::vector<TrainSample> batch(batch_size);
    for (long step = 1; step <= steps; ++step) {
        for (int i = 0; i < batch_size; ++i) {
            const auto& e = entries[rng.next_below(entries.size())];
            batch[i] = TrainSample{e.state, e.pattern, e.reward};
        }
        const double loss = train_step(net, batch, opt);
        if (step % 100 == 0) result.loss_trace.emplace_back(step, loss);
    }
    return result;
}

MutingPattern act_greedy(const QNetwork& net, const StateVector& state) {
    const Eigen::VectorXd q = net.forward(state);
    MutingPattern best = 0;
    double best_q = q(0);
    for (int a = 1; a < q.size(); ++a)
        if (pattern_beats(q(a), static_cast<MutingPattern>(a), best_q, best)) {
            best = static_cast<MutingPattern>(a);
            best_q = q(a);
        }
    return best;
}

double grad_check(const QNetwork& net, const TrainSample& sample, double epsilon) {
    if (epsilon <= 0.0) throw std::invalid_argument("grad_check: epsilon must be positive");

    auto analytic = net.zero_gradients();
    QNetwork probe = net;
    probe.accumulate_gradient(sample, analytic);

    const auto loss_at = [&]() {
        const Eigen::VectorXd q = probe.forward(sample.state);
        const double err = q(sample.action) - sample.target;
        return err * err;
    };
    // Rectifier on/off pattern of every hidden unit; a parameter whose
    // perturbation flips a unit across the kink has no two-sided
    // derivative there, so such parameters are skipped.
    const auto activation_pattern = [&]() {
        std::vector<char> mask;
        Eigen::VectorXd a =
            Eigen::Map<const Eigen::VectorXd>(sample.state.data(), sample.state.size());
        for (std::size_t l = 0; l + 1 < probe.weights.size(); ++l) {
            a = probe.weights[l] * a + probe.biases[l];
            for (Eigen::Index i = 0; i < a.size(); ++i) mask.push_back(a(i) > 0.0);
            a = a.cwiseMax(0.0);
        }
        return mask;
    };

    double max_err = 0.0;
    const auto check_param = [&](double& p, double analytic_grad) {
        const double saved = p;
        p = saved + epsilon;
        const double plus = loss_at();
        const auto mask_plus = activation_pattern();
        p = saved - epsilon;
        const double minus = loss_at();
        const auto mask_minus = activation_pattern();
        p = saved;
        if (mask_plus != mask_minus) return;
        const double numeric = (plus - minus) / (2.0 * epsilon);
        const double denom = std::max(std::abs(analytic_grad), std::abs(numeric));
        const double err = denom < 1e-8 ? std::abs(analytic_grad - numeric)
                                        : std::abs(analytic_grad - numeric) / denom;
        max_err = std::max(max_err, err);
    };

    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        for (Eigen::Index i = 0; i < probe.weights[l].size(); ++i)
            check_param(probe.weights[l].data()[i], analytic.weights[l].data()[i]);
        for (Eigen::Index i = 0; i < probe.biases[l].size(); ++i)
            check_param(probe.biases[l].data()[i], analytic.biases[l].data()[i]);
    }
    return max_err;
}

void QNetwork::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("QNetwork: cannot write " + path);
    out << "qnetv1\n";
    for (std::size_t i = 0; i < dims_.size(); ++i) out << (i ? " " : "") << dims_[i];
    out << '\n';
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (Eigen::Index r = 0; r < weights[l].rows(); ++r)
            for (Eigen::Index c = 0; c < weights[l].cols(); ++c)
                out << format_double(weights[l](r, c)) << '\n';
        for (Eigen::Index i = 0; i < biases[l].size(); ++i)
            out << format_double(biases[l](i)) << '\n';
    }
    if (!out) throw std::runtime_error("QNetwork: write failed on " + path);
}

QNetwork QNetwork::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("QNetwork: cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != "qnetv1")
        throw std::runtime_error("QNetwork: " + path + ": missing qnetv1 header");
    if (!std::getline(in, line)) throw std::runtime_error("QNetwork: " + path + ": missing dims");

    QNetwork net;
    for (const auto& tok : split(line, ' '))
        if (!tok.empty()) net.dims_.push_back(std::stoi(tok));
    if (net.dims_.size() < 2) throw std::runtime_error("QNetwork: " + path + ": bad dims line");

    const auto next_value = [&]() {
        if (!std::getline(in, line))
            throw std::runtime_error("QNetwork: " + path + ": truncated parameter block");
        return parse_double(line);
    };
    for (std::size_t l = 0; l + 1 < net.dims_.size(); ++l) {
        Eigen::MatrixXd w(net.dims_[l + 1], net.dims_[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = next_value();
        Eigen::VectorXd b(net.dims_[l + 1]);
        for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = next_value();
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
    }
    return net;
}

}  // namespace dpb
