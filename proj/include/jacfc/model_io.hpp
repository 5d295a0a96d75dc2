#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jacfc/featfusion.hpp"
#include "jacfc/mlp.hpp"
#include "jacfc/trainer.hpp"

namespace jacfc {

enum class TrainMode { Separate, Joint };

std::string_view to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view text);

/// A trained model file: one network (joint) or one per day (separate), plus
/// the feature layout and featurizer state the networks expect.
struct ModelBundle {
    static constexpr int kVersion = 1;

    TrainMode mode = TrainMode::Joint;
    FeatureLayout layout;
    /// Fusion config incl. schemas and salary statistics; null for imported
    /// embeddings.
    nlohmann::json featurizer;
    struct Entry {
        std::optional<int> day;
        MlpModel model;
    };
    std::vector<Entry> entries;

    /// Network for rows at day `t`.
    const MlpModel& model_for(int t) const;
};

nlohmann::json to_json(const MlpModel& model);
MlpModel mlp_from_json(const nlohmann::json& j);

void save_model(const std::string& path, const ModelBundle& bundle);
ModelBundle load_model(const std::string& path);

/// History CSV: `epoch,train_loss,val_mae`; separate mode prepends `day`.
void write_history(const std::string& path, TrainMode mode,
                   const std::vector<std::pair<std::optional<int>, std::vector<EpochRecord>>>& histories);

}  // namespace jacfc
