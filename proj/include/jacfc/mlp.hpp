#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace jacfc {

/// Weights are (fan_out x fan_in); activations flow as columns.
struct DenseLayer {
    Eigen::MatrixXd weights;
    Eigen::VectorXd bias;

    std::size_t fan_in() const { return static_cast<std::size_t>(weights.cols()); }
    std::size_t fan_out() const { return static_cast<std::size_t>(weights.rows()); }
};

inline const std::vector<std::size_t> kDefaultHiddenDims = {256, 128, 64, 32};

/// Uniform on [-L, L] with L = sqrt(6 / (fan_in + fan_out)).
Eigen::MatrixXd glorot_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed);

/// ReLU hidden layers, single identity output unit.
class MlpModel {
public:
    MlpModel() = default;
    explicit MlpModel(std::vector<DenseLayer> layers);

    /// Glorot weights, zero biases; layer k is seeded from (seed, k).
    static MlpModel initialized(std::size_t input_dim, std::span<const std::size_t> hidden_dims, std::uint64_t seed);

    std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().fan_in(); }
    std::vector<std::size_t> hidden_dims() const;
    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& layers() { return layers_; }

    double forward(std::span<const double> x) const;
    /// One prediction per column of `inputs` (input_dim x batch).
    Eigen::RowVectorXd forward_batch(const Eigen::Ref<const Eigen::MatrixXd>& inputs) const;

private:
    std::vector<DenseLayer> layers_;
};

/// Pre- and post-activation values of every layer for one batch.
struct ForwardCache {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> pre;
    std::vector<Eigen::MatrixXd> post;

    const Eigen::RowVectorXd predictions() const { return post.back().row(0); }
};

ForwardCache forward_cached(const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs);

double l1_loss(double prediction, double target);
/// Mean absolute error over the batch.
double l1_loss(std::span<const double> predictions, std::span<const double> targets);

using Gradients = std::vector<DenseLayer>;

/// Gradients of the mean L1 loss, with sign(0) = 0 at the kink.
Gradients backward(const MlpModel& model, const ForwardCache& cache, std::span<const double> targets);

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct OptimizerState {
    Gradients first_moment;
    Gradients second_moment;
    std::int64_t step = 0;

    static OptimizerState zeros_like(const MlpModel& model);
};

void adam_step(MlpModel& model, OptimizerState& state, const Gradients& gradients, const AdamConfig& config);

}  // namespace jacfc
