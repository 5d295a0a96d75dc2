#include "jacfc/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "jacfc/random.hpp"

namespace jacfc {

namespace {

void check_shapes(const Gradients& a, const std::vector<DenseLayer>& b, const char* what) {
    bool ok = a.size() == b.size();
    for (std::size_t i = 0; ok && i < a.size(); ++i) {
        ok = a[i].weights.rows() == b[i].weights.rows() && a[i].weights.cols() == b[i].weights.cols() &&
             a[i].bias.size() == b[i].bias.size();
    }
    if (!ok) throw std::invalid_argument(std::string(what) + " shapes do not match the model");
}

}  // namespace

Eigen::MatrixXd glorot_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed) {
    if (fan_in == 0 || fan_out == 0) throw std::invalid_argument("glorot_init needs fan_in, fan_out >= 1");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Rng rng(seed);
    Eigen::MatrixXd w(static_cast<Eigen::Index>(fan_out), static_cast<Eigen::Index>(fan_in));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
    }
    return w;
}

MlpModel::MlpModel(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("model needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].bias.size() != layers_[i].weights.rows()) {
            throw std::invalid_argument("bias length does not match layer " + std::to_string(i));
        }
        if (i > 0 && layers_[i].fan_in() != layers_[i - 1].fan_out()) {
            throw std::invalid_argument("layer " + std::to_string(i) + " does not chain with its predecessor");
        }
    }
    if (layers_.back().fan_out() != 1) throw std::invalid_argument("output layer must have one unit");
}

MlpModel MlpModel::initialized(std::size_t input_dim, std::span<const std::size_t> hidden_dims, std::uint64_t seed) {
    std::vector<DenseLayer> layers;
    std::size_t fan_in = input_dim;
    std::vector<std::size_t> widths(hidden_dims.begin(), hidden_dims.end());
    widths.push_back(1);
    for (std::size_t k = 0; k < widths.size(); ++k) {
        DenseLayer layer;
        layer.weights = glorot_init(fan_in, widths[k], derive_seed(seed, k));
        layer.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(widths[k]));
        layers.push_back(std::move(layer));
        fan_in = widths[k];
    }
    return MlpModel(std::move(layers));
}

std::vector<std::size_t> MlpModel::hidden_dims() const {
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) dims.push_back(layers_[i].fan_out());
    return dims;
}

double MlpModel::forward(std::span<const double> x) const {
    if (x.size() != input_dim()) {
        throw std::invalid_argument("input has " + std::to_string(x.size()) + " features, model expects " +
                                    std::to_string(input_dim()));
    }
    Eigen::Map<const Eigen::VectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
    return forward_batch(in)(0);
}

Eigen::RowVectorXd MlpModel::forward_batch(const Eigen::Ref<const Eigen::MatrixXd>& inputs) const {
    if (static_cast<std::size_t>(inputs.rows()) != input_dim()) {
        throw std::invalid_argument("input has " + std::to_string(inputs.rows()) + " features, model expects " +
                                    std::to_string(input_dim()));
    }
    Eigen::MatrixXd a = inputs;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::MatrixXd z = layers_[i].weights * a;
        z.colwise() += layers_[i].bias;
        a = (i + 1 < layers_.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
    }
    return a.row(0);
}

ForwardCache forward_cached(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
    if (static_cast<std::size_t>(inputs.rows()) != model.input_dim()) {
        throw std::invalid_argument("input dimension mismatch");
    }
    ForwardCache cache;
    cache.input = inputs;
    const auto& layers = model.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const Eigen::MatrixXd& a = i == 0 ? cache.input : cache.post.back();
        Eigen::MatrixXd z = layers[i].weights * a;
        z.colwise() += layers[i].bias;
        cache.post.push_back(i + 1 < layers.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z);
        cache.pre.push_back(std::move(z));
    }
    return cache;
}

double l1_loss(double prediction, double target) { return std::fabs(prediction - target); }

double l1_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size() || predictions.empty()) {
        throw std::invalid_argument("l1_loss needs equal, non-empty batches");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) total += std::fabs(predictions[i] - targets[i]);
    return total / static_cast<double>(predictions.size());
}

Gradients backward(const MlpModel& model, const ForwardCache& cache, std::span<const double> targets) {
    const auto& layers = model.layers();
    const Eigen::Index batch = cache.input.cols();
    if (static_cast<Eigen::Index>(targets.size()) != batch) throw std::invalid_argument("target count mismatch");

    Eigen::MatrixXd delta(1, batch);
    const auto& out = cache.post.back();
    for (Eigen::Index j = 0; j < batch; ++j) {
        const double diff = out(0, j) - targets[static_cast<std::size_t>(j)];
        delta(0, j) = (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0)) / static_cast<double>(batch);
    }

    Gradients grads(layers.size());
    for (std::size_t k = layers.size(); k-- > 0;) {
        const Eigen::MatrixXd& a_prev = k == 0 ? cache.input : cache.post[k - 1];
        grads[k].weights = delta * a_prev.transpose();
        grads[k].bias = delta.rowwise().sum();
        if (k > 0) {
            Eigen::MatrixXd back = layers[k].weights.transpose() * delta;
            delta = back.cwiseProduct((cache.pre[k - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return grads;
}

OptimizerState OptimizerState::zeros_like(const MlpModel& model) {
    OptimizerState state;
    for (const auto& layer : model.layers()) {
        DenseLayer zero{Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                        Eigen::VectorXd::Zero(layer.bias.size())};
        state.first_moment.push_back(zero);
        state.second_moment.push_back(std::move(zero));
    }
    return state;
}

void adam_step(MlpModel& model, OptimizerState& state, const Gradients& gradients, const AdamConfig& config) {
    check_shapes(gradients, model.layers(), "gradient");
    check_shapes(state.first_moment, model.layers(), "optimizer state");
    check_shapes(state.second_moment, model.layers(), "optimizer state");
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(config.beta1, t);
    const double correction2 = 1.0 - std::pow(config.beta2, t);
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = config.beta1 * m + (1.0 - config.beta1) * g;
        v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseProduct(g);
        param.array() -= config.learning_rate * (m.array() / correction1) /
                         ((v.array() / correction2).sqrt() + config.epsilon);
    };
    auto& layers = model.layers();
    for (std::size_t k = 0; k < layers.size(); ++k) {
        update(layers[k].weights, state.first_moment[k].weights, state.second_moment[k].weights, gradients[k].weights);
        update(layers[k].bias, state.first_moment[k].bias, state.second_moment[k].bias, gradients[k].bias);
    }
}

}  // namespace jacfc
