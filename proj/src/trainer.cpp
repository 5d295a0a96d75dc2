#include "jacfc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jacfc/random.hpp"

namespace jacfc {

namespace {

constexpr std::size_t kEvalChunk = 1024;

Eigen::MatrixXd gather_columns(const RowMatrix& inputs, std::span<const std::size_t> rows) {
    Eigen::MatrixXd batch(inputs.cols(), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        batch.col(static_cast<Eigen::Index>(j)) = inputs.row(static_cast<Eigen::Index>(rows[j])).transpose();
    }
    return batch;
}

}  // namespace

void TrainConfig::validate() const {
    if (!(adam.learning_rate > 0.0) || batch_size == 0 || patience == 0 || !(adam.epsilon > 0.0)) {
        throw std::invalid_argument("learning rate, batch size, epsilon and patience must be positive");
    }
    if (!(adam.beta1 > 0.0 && adam.beta1 < 1.0 && adam.beta2 > 0.0 && adam.beta2 < 1.0)) {
        throw std::invalid_argument("adam betas must be in (0, 1)");
    }
    for (auto d : hidden_dims) {
        if (d == 0) throw std::invalid_argument("hidden layer widths must be positive");
    }
}

EarlyStopping::EarlyStopping(std::size_t patience, double min_delta)
    : patience_(patience), min_delta_(min_delta), best_(std::numeric_limits<double>::infinity()) {
    if (patience == 0) throw std::invalid_argument("patience must be >= 1");
}

bool EarlyStopping::observe(double validation_mae) {
    ++epochs_;
    if (epochs_ == 1 || validation_mae <= best_ - min_delta_) {
        best_ = validation_mae;
        best_epoch_ = epochs_;
        stale_epochs_ = 0;
        return true;
    }
    ++stale_epochs_;
    return false;
}

TrainingData training_data(const FeatureMatrix& features, std::optional<int> day) {
    TrainingData data;
    data.inputs = &features.values;
    data.labels.reserve(features.rows());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto& key = features.keys[r];
        data.labels.push_back(static_cast<double>(key.jac));
        if (day && key.t != *day) continue;
        if (key.split == Split::Train) data.train_rows.push_back(r);
        if (key.split == Split::Val) data.val_rows.push_back(r);
    }
    return data;
}

double evaluate_mae(const MlpModel& model, const RowMatrix& inputs, std::span<const double> labels,
                    std::span<const std::size_t> rows) {
    if (rows.empty()) throw std::invalid_argument("cannot evaluate on an empty row set");
    double total = 0.0;
    for (std::size_t start = 0; start < rows.size(); start += kEvalChunk) {
        const auto chunk = rows.subspan(start, std::min(kEvalChunk, rows.size() - start));
        const Eigen::RowVectorXd pred = model.forward_batch(gather_columns(inputs, chunk));
        for (std::size_t j = 0; j < chunk.size(); ++j) {
            total += std::fabs(pred(static_cast<Eigen::Index>(j)) - labels[chunk[j]]);
        }
    }
    return total / static_cast<double>(rows.size());
}

std::vector<double> predict_rows(const MlpModel& model, const RowMatrix& inputs) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(inputs.rows()));
    for (Eigen::Index start = 0; start < inputs.rows(); start += static_cast<Eigen::Index>(kEvalChunk)) {
        const Eigen::Index n = std::min<Eigen::Index>(static_cast<Eigen::Index>(kEvalChunk), inputs.rows() - start);
        const Eigen::RowVectorXd pred = model.forward_batch(inputs.middleRows(start, n).transpose());
        out.insert(out.end(), pred.data(), pred.data() + pred.size());
    }
    return out;
}

TrainResult train(const TrainingData& data, const TrainConfig& config) {
    config.validate();
    if (data.inputs == nullptr) throw std::invalid_argument("training data has no inputs");
    if (data.train_rows.empty()) throw std::invalid_argument("empty training split");
    if (data.val_rows.empty()) throw std::invalid_argument("empty validation split");
    if (data.labels.size() != static_cast<std::size_t>(data.inputs->rows())) {
        throw std::invalid_argument("label count does not match input rows");
    }
    const auto& inputs = *data.inputs;

    TrainResult result;
    result.model = MlpModel::initialized(static_cast<std::size_t>(inputs.cols()), config.hidden_dims, config.seed);
    if (config.max_epochs == 0) return result;

    // Start the output bias at the training-label median, the best constant
    // under L1; the hidden layers then only have to model the residual.
    MlpModel model = result.model;
    {
        std::vector<double> train_labels;
        for (std::size_t r : data.train_rows) train_labels.push_back(data.labels[r]);
        const auto mid = train_labels.begin() + static_cast<std::ptrdiff_t>(train_labels.size() / 2);
        std::nth_element(train_labels.begin(), mid, train_labels.end());
        model.layers().back().bias.setConstant(*mid);
    }
    OptimizerState state = OptimizerState::zeros_like(model);
    EarlyStopping stopper(config.patience);
    std::vector<std::size_t> order = data.train_rows;
    std::vector<double> targets;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        Rng rng(derive_seed(config.seed, 0xE90C0000ULL + epoch));
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::span<const std::size_t> batch(order.data() + start,
                                                     std::min(config.batch_size, order.size() - start));
            targets.clear();
            for (std::size_t r : batch) targets.push_back(data.labels[r]);
            const ForwardCache cache = forward_cached(model, gather_columns(inputs, batch));
            const Eigen::RowVectorXd pred = cache.predictions();
            loss_sum += l1_loss(std::span<const double>(pred.data(), batch.size()), targets) *
                        static_cast<double>(batch.size());
            adam_step(model, state, backward(model, cache, targets), config.adam);
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = loss_sum / static_cast<double>(order.size());
        record.val_mae = evaluate_mae(model, inputs, data.labels, data.val_rows);
        result.history.push_back(record);
        if (stopper.observe(record.val_mae)) {
            result.model = model;
            result.best_epoch = epoch;
        }
        if (stopper.should_stop()) break;
    }
    return result;
}

}  // namespace jacfc
