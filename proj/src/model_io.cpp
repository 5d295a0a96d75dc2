#include "jacfc/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include "jacfc/datamodel.hpp"
#include "jacfc/feature_io.hpp"

namespace jacfc {

using nlohmann::json;

std::string_view to_string(TrainMode mode) { return mode == TrainMode::Joint ? "joint" : "separate"; }

TrainMode parse_train_mode(std::string_view text) {
    if (text == "joint") return TrainMode::Joint;
    if (text == "separate") return TrainMode::Separate;
    throw std::invalid_argument("unknown training mode '" + std::string(text) + "'");
}

const MlpModel& ModelBundle::model_for(int t) const {
    for (const auto& entry : entries) {
        if (!entry.day || *entry.day == t) return entry.model;
    }
    throw DataError("model has no network for day " + std::to_string(t));
}

json to_json(const MlpModel& model) {
    json layers = json::array();
    for (const auto& layer : model.layers()) {
        json weights = json::array();
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) row.push_back(layer.weights(r, c));
            weights.push_back(std::move(row));
        }
        json bias = json::array();
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) bias.push_back(layer.bias(r));
        layers.push_back({{"weights", std::move(weights)}, {"bias", std::move(bias)}});
    }
    return layers;
}

MlpModel mlp_from_json(const json& j) {
    std::vector<DenseLayer> layers;
    for (const auto& layer_json : j) {
        const auto& weights = layer_json.at("weights");
        const auto& bias = layer_json.at("bias");
        DenseLayer layer;
        const auto rows = static_cast<Eigen::Index>(weights.size());
        const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(weights.at(0).size());
        layer.weights.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto& row = weights.at(static_cast<std::size_t>(r));
            if (static_cast<Eigen::Index>(row.size()) != cols) throw DataError("ragged weight matrix in model file");
            for (Eigen::Index c = 0; c < cols; ++c) layer.weights(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
        layer.bias.resize(static_cast<Eigen::Index>(bias.size()));
        for (std::size_t r = 0; r < bias.size(); ++r) layer.bias(static_cast<Eigen::Index>(r)) = bias.at(r).get<double>();
        layers.push_back(std::move(layer));
    }
    try {
        return MlpModel(std::move(layers));
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("invalid model: ") + e.what());
    }
}

void save_model(const std::string& path, const ModelBundle& bundle) {
    if (bundle.entries.empty()) throw std::invalid_argument("model bundle is empty");
    const auto& first = bundle.entries.front().model;
    json models = json::array();
    for (const auto& entry : bundle.entries) {
        models.push_back({{"day", entry.day ? json(*entry.day) : json(nullptr)}, {"layers", to_json(entry.model)}});
    }
    json doc = {
        {"version", ModelBundle::kVersion},
        {"mode", to_string(bundle.mode)},
        {"input_dim", first.input_dim()},
        {"hidden_dims", first.hidden_dims()},
        {"feature_layout", to_json(bundle.layout)},
        {"normalization", bundle.featurizer},
        {"models", std::move(models)},
    };
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << doc.dump() << '\n';
}

ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    try {
        if (doc.at("version").get<int>() != ModelBundle::kVersion) {
            throw DataError("unsupported model version " + doc.at("version").dump());
        }
        ModelBundle bundle;
        bundle.mode = parse_train_mode(doc.at("mode").get<std::string>());
        bundle.layout = layout_from_json(doc.at("feature_layout"));
        bundle.featurizer = doc.at("normalization");
        const auto input_dim = doc.at("input_dim").get<std::size_t>();
        for (const auto& entry : doc.at("models")) {
            ModelBundle::Entry e;
            if (!entry.at("day").is_null()) e.day = entry.at("day").get<int>();
            e.model = mlp_from_json(entry.at("layers"));
            if (e.model.input_dim() != input_dim) throw DataError("network input_dim disagrees with model header");
            bundle.entries.push_back(std::move(e));
        }
        if (bundle.entries.empty()) throw DataError("model file has no networks");
        if (layout_width(bundle.layout) != input_dim) throw DataError("feature layout width disagrees with input_dim");
        return bundle;
    } catch (const json::exception& e) {
        throw DataError("malformed model file '" + path + "': " + e.what());
    }
}

void write_history(const std::string& path, TrainMode mode,
                   const std::vector<std::pair<std::optional<int>, std::vector<EpochRecord>>>& histories) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    const bool separate = mode == TrainMode::Separate;
    out << (separate ? "day,epoch,train_loss,val_mae\n" : "epoch,train_loss,val_mae\n");
    char buffer[128];
    for (const auto& [day, records] : histories) {
        for (const auto& r : records) {
            if (separate) out << (day ? std::to_string(*day) : std::string("all")) << ',';
            std::snprintf(buffer, sizeof(buffer), "%zu,%.6f,%.6f\n", r.epoch, r.train_loss, r.val_mae);
            out << buffer;
        }
    }
}

}  // namespace jacfc
