#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jacfc/feature_io.hpp"
#include "jacfc/mlp.hpp"

namespace jacfc {

struct TrainConfig {
    AdamConfig adam;
    std::size_t batch_size = 256;
    std::size_t max_epochs = 50;
    std::size_t patience = 5;
    std::vector<std::size_t> hidden_dims = kDefaultHiddenDims;
    std::uint64_t seed = 42;

    void validate() const;
};

/// Patience counter over validation MAE. An epoch improves when it beats the
/// best value so far by at least `min_delta`.
class EarlyStopping {
public:
    explicit EarlyStopping(std::size_t patience, double min_delta = 1e-6);

    /// Records one epoch; returns true when it is the new best.
    bool observe(double validation_mae);
    bool should_stop() const { return stale_epochs_ >= patience_; }
    /// 1-based epoch of the best value; 0 before any epoch.
    std::size_t best_epoch() const { return best_epoch_; }
    double best_value() const { return best_; }
    std::size_t epochs_seen() const { return epochs_; }

private:
    std::size_t patience_;
    double min_delta_;
    double best_;
    std::size_t best_epoch_ = 0;
    std::size_t epochs_ = 0;
    std::size_t stale_epochs_ = 0;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_mae = 0.0;
};

struct TrainResult {
    MlpModel model;
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
};

/// Rows of `features.values` selected by index sets; labels are the row jac.
struct TrainingData {
    const RowMatrix* inputs = nullptr;
    std::vector<double> labels;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> val_rows;
};

/// Selects train/val rows, optionally only those at day `t`.
TrainingData training_data(const FeatureMatrix& features, std::optional<int> day = std::nullopt);

/// Mini-batch Adam on the train rows with early stopping on validation MAE;
/// returns the weights of the best validation epoch.
TrainResult train(const TrainingData& data, const TrainConfig& config);

/// Mean absolute error of `model` on the given rows (unclamped predictions).
double evaluate_mae(const MlpModel& model, const RowMatrix& inputs, std::span<const double> labels,
                    std::span<const std::size_t> rows);

/// Predictions for every row, in row order.
std::vector<double> predict_rows(const MlpModel& model, const RowMatrix& inputs);

}  // namespace jacfc
