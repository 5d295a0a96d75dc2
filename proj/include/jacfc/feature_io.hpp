#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "jacfc/datamodel.hpp"
#include "jacfc/featfusion.hpp"

namespace jacfc {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FeatureRowKey {
    std::string job_id;
    int t = 0;
    Split split = Split::Train;
    int jac = 0;

    bool operator==(const FeatureRowKey&) const = default;
};

/// One row per (job, t) observation.
struct FeatureMatrix {
    FeatureLayout layout;
    /// Featurizer state the rows were produced with; null for imported
    /// embeddings.
    nlohmann::json featurizer;
    std::vector<FeatureRowKey> keys;
    RowMatrix values;

    std::size_t rows() const { return keys.size(); }
    std::size_t width() const { return static_cast<std::size_t>(values.cols()); }
};

nlohmann::json to_json(const FusionConfig& config);
FusionConfig fusion_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FeatureLayout& layout);
FeatureLayout layout_from_json(const nlohmann::json& j);

/// Fuses every observation of a split-tagged dataset.
FeatureMatrix featurize(const Dataset& dataset, const SkillEmbeddingTable& table, const FusionConfig& config);

/// Binary unless `path` ends in ".csv". The CSV header is
/// `job_id,t,split,jac,<span>.<i>...` so the layout spans are recoverable.
void write_features(const std::string& path, const FeatureMatrix& features);
FeatureMatrix read_features(const std::string& path);

}  // namespace jacfc
