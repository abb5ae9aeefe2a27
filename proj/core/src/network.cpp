#include "hrv/network.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hrv/errors.hpp"
#include "hrv/rng.hpp"

namespace hrv {

namespace {

using nlohmann::json;

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Eigen::VectorXd sigmoid(Eigen::VectorXd z) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
    return z;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    if (rows.empty()) throw SchemaError("empty matrix in network file");
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw SchemaError("ragged matrix in network file");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c].get<double>();
    }
    return m;
}

} // namespace

Network init_network(std::size_t n_in, std::size_t n_hidden, std::uint64_t seed) {
    if (n_hidden < 2 || n_hidden > 6)
        throw ConfigError("hidden size must be in [2, 6], got " + std::to_string(n_hidden));
    if (n_in == 0) throw ConfigError("network needs at least one input");

    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(n_in));
    Network net;
    net.w1.resize(static_cast<Eigen::Index>(n_hidden), static_cast<Eigen::Index>(n_in));
    net.b1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_hidden));
    net.w2.resize(2, static_cast<Eigen::Index>(n_hidden));
    net.b2 = Eigen::VectorXd::Zero(2);
    for (Eigen::Index r = 0; r < net.w1.rows(); ++r)
        for (Eigen::Index c = 0; c < net.w1.cols(); ++c) net.w1(r, c) = rng.uniform(-bound, bound);
    for (Eigen::Index r = 0; r < net.w2.rows(); ++r)
        for (Eigen::Index c = 0; c < net.w2.cols(); ++c) net.w2(r, c) = rng.uniform(-bound, bound);
    return net;
}

Eigen::Vector2d forward(const Network& net, const Eigen::VectorXd& input) {
    if (input.size() != net.n_inputs())
        throw ShapeError("forward: input size " + std::to_string(input.size()) +
                         " does not match network inputs " + std::to_string(net.n_inputs()));
    const Eigen::VectorXd h = sigmoid(net.w1 * input + net.b1);
    return sigmoid(net.w2 * h + net.b2);
}

Gradients gradient(const Network& net, const Eigen::VectorXd& input,
                   const Eigen::Vector2d& target) {
    if (input.size() != net.n_inputs()) throw ShapeError("gradient: input dimension mismatch");

    const Eigen::VectorXd h = sigmoid(net.w1 * input + net.b1);
    const Eigen::VectorXd y = sigmoid(net.w2 * h + net.b2);

    // delta = dE/dz with E = 1/2 |y - t|^2 and sigmoid activations.
    const Eigen::VectorXd delta2 =
        (y - target).cwiseProduct(y.cwiseProduct(Eigen::VectorXd::Ones(2) - y));
    const Eigen::VectorXd delta1 = (net.w2.transpose() * delta2)
                                       .cwiseProduct(h)
                                       .cwiseProduct(Eigen::VectorXd::Ones(h.size()) - h);

    Gradients g;
    g.w2 = delta2 * h.transpose();
    g.b2 = delta2;
    g.w1 = delta1 * input.transpose();
    g.b1 = delta1;
    return g;
}

namespace {

/// One forward/backward sweep over the batch in matrix form (row = sample);
/// fills `acc` with the mean gradient and returns the mean error.
struct BatchWorkspace {
    Eigen::MatrixXd x, t, h, y, delta2, delta1;
};

double batch_pass(const Network& net, const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets, const std::vector<std::size_t>& idx,
                  Gradients& acc, BatchWorkspace& ws) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    ws.x.resize(m, inputs.cols());
    ws.t.resize(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
        ws.x.row(i) = inputs.row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]));
        ws.t.row(i) = targets.row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]));
    }

    ws.h.noalias() = ws.x * net.w1.transpose();
    ws.h.rowwise() += net.b1.transpose();
    ws.h = ws.h.unaryExpr([](double z) { return sigmoid(z); });

    ws.y.noalias() = ws.h * net.w2.transpose();
    ws.y.rowwise() += net.b2.transpose();
    ws.y = ws.y.unaryExpr([](double z) { return sigmoid(z); });

    const double err = 0.5 * (ws.y - ws.t).squaredNorm();

    ws.delta2 = (ws.y - ws.t).cwiseProduct(ws.y).cwiseProduct((1.0 - ws.y.array()).matrix());
    ws.delta1 = (ws.delta2 * net.w2)
                    .cwiseProduct(ws.h)
                    .cwiseProduct((1.0 - ws.h.array()).matrix());

    const double inv = 1.0 / static_cast<double>(m);
    acc.w2.noalias() = inv * (ws.delta2.transpose() * ws.h);
    acc.b2.noalias() = inv * ws.delta2.colwise().sum().transpose();
    acc.w1.noalias() = inv * (ws.delta1.transpose() * ws.x);
    acc.b1.noalias() = inv * ws.delta1.colwise().sum().transpose();
    return err * inv;
}

} // namespace

TrainResult train(Network net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                  const TrainConfig& cfg) {
    const Eigen::Index n = inputs.rows();
    if (n == 0) throw ShapeError("train: empty dataset");
    if (targets.rows() != n || targets.cols() != 2)
        throw ShapeError("train: targets must be n x 2 one-hot rows");
    if (inputs.cols() != net.n_inputs()) throw ShapeError("train: input width mismatch");
    if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) throw ConfigError("momentum must be in [0,1)");
    if (cfg.max_epochs == 0) throw ConfigError("max_epochs must be positive");

    Gradients vel;
    vel.w1 = Eigen::MatrixXd::Zero(net.w1.rows(), net.w1.cols());
    vel.b1 = Eigen::VectorXd::Zero(net.b1.size());
    vel.w2 = Eigen::MatrixXd::Zero(net.w2.rows(), net.w2.cols());
    vel.b2 = Eigen::VectorXd::Zero(net.b2.size());
    Gradients acc;
    BatchWorkspace ws;

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(cfg.seed);

    TrainResult result;
    result.mse_curve.reserve(cfg.max_epochs);

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        double epoch_err = 0.0;
        if (cfg.minibatch == 0) {
            epoch_err = batch_pass(net, inputs, targets, order, acc, ws);
            vel.w1 = cfg.momentum * vel.w1 - cfg.learning_rate * acc.w1;
            vel.b1 = cfg.momentum * vel.b1 - cfg.learning_rate * acc.b1;
            vel.w2 = cfg.momentum * vel.w2 - cfg.learning_rate * acc.w2;
            vel.b2 = cfg.momentum * vel.b2 - cfg.learning_rate * acc.b2;
            net.w1 += vel.w1;
            net.b1 += vel.b1;
            net.w2 += vel.w2;
            net.b2 += vel.b2;
        } else {
            shuffle_rng.shuffle(order);
            double err_sum = 0.0;
            for (std::size_t lo = 0; lo < order.size(); lo += cfg.minibatch) {
                const std::size_t hi = std::min(order.size(), lo + cfg.minibatch);
                std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                               order.begin() + static_cast<std::ptrdiff_t>(hi));
                err_sum += batch_pass(net, inputs, targets, batch, acc, ws) *
                           static_cast<double>(batch.size());
                vel.w1 = cfg.momentum * vel.w1 - cfg.learning_rate * acc.w1;
                vel.b1 = cfg.momentum * vel.b1 - cfg.learning_rate * acc.b1;
                vel.w2 = cfg.momentum * vel.w2 - cfg.learning_rate * acc.w2;
                vel.b2 = cfg.momentum * vel.b2 - cfg.learning_rate * acc.b2;
                net.w1 += vel.w1;
                net.b1 += vel.b1;
                net.w2 += vel.w2;
                net.b2 += vel.b2;
            }
            epoch_err = err_sum / static_cast<double>(n);
        }

        if (!std::isfinite(epoch_err))
            throw DivergenceError("training loss became non-finite at epoch " +
                                  std::to_string(epoch + 1) +
                                  "; consider lowering learning_rate");
        result.mse_curve.push_back(epoch_err);
        if (epoch_err <= cfg.target_mse) break;
    }

    result.epochs = result.mse_curve.size();
    result.net = std::move(net);
    return result;
}

Prediction predict(const Network& net, const Eigen::VectorXd& input) {
    const Eigen::Vector2d y = forward(net, input);
    Prediction p;
    p.label = y[1] > y[0] ? ClassLabel::ihd : ClassLabel::normal;
    p.score = y[1];
    return p;
}

std::string network_to_json_string(const Network& net) {
    json j;
    j["format_version"] = 1;
    j["n_inputs"] = net.n_inputs();
    j["n_hidden"] = net.n_hidden();
    j["w1"] = matrix_to_json(net.w1);
    j["b1"] = matrix_to_json(net.b1);
    j["w2"] = matrix_to_json(net.w2);
    j["b2"] = matrix_to_json(net.b2);
    return j.dump(2);
}

Network network_from_json_string(const std::string& text) {
    json j = json::parse(text, nullptr, true, true);
    if (j.value("format_version", 0) != 1)
        throw SchemaError("unsupported network payload version");
    Network net;
    net.w1 = matrix_from_json(j.at("w1"));
    net.b1 = matrix_from_json(j.at("b1")).col(0);
    net.w2 = matrix_from_json(j.at("w2"));
    net.b2 = matrix_from_json(j.at("b2")).col(0);
    if (net.w2.rows() != 2 || net.w1.rows() != net.w2.cols() || net.b1.size() != net.w1.rows() ||
        net.b2.size() != 2)
        throw SchemaError("inconsistent network dimensions");
    return net;
}

void save_network(const std::filesystem::path& path, const Network& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << network_to_json_string(net) << '\n';
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return network_from_json_string(text);
}

} // namespace hrv
