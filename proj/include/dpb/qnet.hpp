#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dpb/deployment.hpp"
#include "dpb/encoder.hpp"
#include "dpb/rem.hpp"

namespace dpb {

struct TrainSample {
    StateVector state;
    MutingPattern action = 0;
    double target = 0.0;
};

// Plain MLP: affine + rectifier on hidden layers, identity output.
// Output q[a] approximates the reward of muting pattern a.
class QNetwork {
public:
    QNetwork() = default;
    QNetwork(std::vector<int> dims, std::uint64_t seed);

    const std::vector<int>& dims() const { return dims_; }
    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }
    std::size_t parameter_count() const;

    Eigen::VectorXd forward(const StateVector& state) const;

    // Gradient of the masked squared error d/dtheta (q[action] - target)^2
    // accumulated into grads (same shapes as weights/biases).
    struct Gradients {
        std::vector<Eigen::MatrixXd> weights;
        std::vector<Eigen::VectorXd> biases;
        void set_zero();
    };
    Gradients zero_gradients() const;

    // Returns the sample's squared error and accumulates its gradient.
    double accumulate_gradient(const TrainSample& sample, Gradients& grads) const;

    void save(const std::string& path) const;
    static QNetwork load(const std::string& path);

    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

private:
    std::vector<int> dims_;
};

struct AdamState {
    double step_size = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long t = 0;
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;

    static AdamState init_for(const QNetwork& net);
};

// One Adam step on the mean masked squared error over the batch; returns
// the loss. Throws if the loss goes non-finite.
double train_step(QNetwork& net, const std::vector<TrainSample>& batch, AdamState& opt);

struct TrainResult {
    // (step, loss) recorded every 100 steps.
    std::vector<std::pair<long, double>> loss_trace;
};

// Experience replay over the exhaustive REM: uniform-with-replacement
// batches for `steps` gradient steps.
TrainResult train(QNetwork& net, const RemStore& rem, long steps, int batch_size,
                  std::uint64_t seed);

// Greedy action: argmax of q with the shared pattern tie rule.
MutingPattern act_greedy(const QNetwork& net, const StateVector& state);

// Max relative error between the analytic gradient and central finite
// differences over every parameter. Denominators below 1e-8 fall back to
// absolute error.
double grad_check(const QNetwork& net, const TrainSample& sample, double epsilon = 1e-5);

}  // namespace dpb
