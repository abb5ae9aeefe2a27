#ifndef HRV_NETWORK_HPP
#define HRV_NETWORK_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "hrv/rr_series.hpp"

namespace hrv {

/// Single-hidden-layer feedforward net, logistic sigmoid on both layers,
/// two output nodes: (y_normal, y_ihd).
struct Network {
    Eigen::MatrixXd w1; // hidden x input
    Eigen::VectorXd b1; // hidden
    Eigen::MatrixXd w2; // 2 x hidden
    Eigen::VectorXd b2; // 2

    Eigen::Index n_inputs() const { return w1.cols(); }
    Eigen::Index n_hidden() const { return w1.rows(); }
};

struct Gradients {
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
};

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    std::size_t max_epochs = 1000;
    double target_mse = 1e-3;
    std::size_t minibatch = 0; // 0 = full batch (deterministic default)
    std::uint64_t seed = 0;    // shuffling seed, used only when minibatch > 0
};

struct TrainResult {
    Network net;
    std::vector<double> mse_curve; // mean per-sample error per epoch
    std::size_t epochs = 0;
};

/// Weights uniform in [-1/sqrt(n_in), +1/sqrt(n_in)], biases zero;
/// deterministic in the seed. Hidden size is bounded to [2, 6].
Network init_network(std::size_t n_in, std::size_t n_hidden, std::uint64_t seed);

Eigen::Vector2d forward(const Network& net, const Eigen::VectorXd& input);

/// Analytic backpropagation gradients of E = 1/2 * sum((y - t)^2) for one
/// sample. target must be one-hot.
Gradients gradient(const Network& net, const Eigen::VectorXd& input,
                   const Eigen::Vector2d& target);

/// Gradient-descent training with momentum. One epoch = one full-batch
/// update on the mean sample gradient (or shuffled mini-batches when
/// cfg.minibatch > 0). Stops at max_epochs or when the epoch's mean error
/// is at or below target_mse. Throws DivergenceError on a non-finite loss.
TrainResult train(Network net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                  const TrainConfig& cfg);

struct Prediction {
    ClassLabel label = ClassLabel::normal;
    double score = 0.0; // y_ihd, the ROC sweep variable
};

/// argmax of the two outputs; ties resolve to normal.
Prediction predict(const Network& net, const Eigen::VectorXd& input);

void save_network(const std::filesystem::path& path, const Network& net);
Network load_network(const std::filesystem::path& path);

/// JSON payloads, shared by the network file and the model bundle.
std::string network_to_json_string(const Network& net);
Network network_from_json_string(const std::string& text);

} // namespace hrv

#endif // HRV_NETWORK_HPP
