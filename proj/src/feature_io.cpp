#include "jacfc/feature_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace jacfc {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'J', 'A', 'C', 'F', 'E', 'A', 'T', '1'};

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw DataError("truncated feature file");
    return value;
}

std::string format_double(double v) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, ptr);
}

void write_csv(const std::string& path, const FeatureMatrix& features) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "job_id,t,split,jac";
    for (const auto& span : features.layout) {
        for (std::size_t i = 0; i < span.length; ++i) out << ',' << span.name << '.' << i;
    }
    out << '\n';
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto& key = features.keys[r];
        out << key.job_id << ',' << key.t << ',' << to_string(key.split) << ',' << key.jac;
        for (Eigen::Index c = 0; c < features.values.cols(); ++c) {
            out << ',' << format_double(features.values(static_cast<Eigen::Index>(r), c));
        }
        out << '\n';
    }
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

FeatureMatrix read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty feature file '" + path + "'");
    auto header = split_commas(line);
    if (header.size() < 4 || header[0] != "job_id" || header[1] != "t" || header[2] != "split" || header[3] != "jac") {
        throw DataError("feature CSV header must start with job_id,t,split,jac", 1);
    }
    FeatureMatrix features;
    for (std::size_t i = 4; i < header.size(); ++i) {
        auto dot = header[i].rfind('.');
        std::string name = header[i].substr(0, dot);
        if (features.layout.empty() || features.layout.back().name != name) {
            features.layout.push_back({name, i - 4, 0});
        }
        ++features.layout.back().length;
    }
    const std::size_t width = header.size() - 4;
    std::vector<double> flat;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_commas(line);
        if (fields.size() != header.size()) {
            throw DataError("ragged feature row at line " + std::to_string(line_no), line_no);
        }
        FeatureRowKey key;
        key.job_id = fields[0];
        key.t = std::stoi(fields[1]);
        key.split = parse_split(fields[2]);
        key.jac = std::stoi(fields[3]);
        features.keys.push_back(std::move(key));
        for (std::size_t i = 4; i < fields.size(); ++i) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
            if (ec != std::errc()) throw DataError("non-numeric feature at line " + std::to_string(line_no), line_no);
            flat.push_back(v);
        }
    }
    features.values = Eigen::Map<RowMatrix>(flat.data(), static_cast<Eigen::Index>(features.keys.size()),
                                            static_cast<Eigen::Index>(width));
    features.featurizer = nullptr;
    return features;
}

}  // namespace

json to_json(const FusionConfig& config) {
    json schemas = json::array();
    for (const auto& schema : config.schemas) schemas.push_back({{"field", schema.field}, {"values", schema.values}});
    return {
        {"d_company", config.d_company},
        {"d_title", config.d_title},
        {"d_desc", config.d_desc},
        {"skill_dim", config.skill_dim},
        {"schemas", schemas},
        {"salary_mean", config.salary.mean},
        {"salary_stddev", config.salary.stddev},
        {"include_day", config.include_day},
        {"days", config.days},
    };
}

FusionConfig fusion_config_from_json(const json& j) {
    FusionConfig config;
    config.d_company = j.at("d_company").get<std::size_t>();
    config.d_title = j.at("d_title").get<std::size_t>();
    config.d_desc = j.at("d_desc").get<std::size_t>();
    config.skill_dim = j.at("skill_dim").get<std::size_t>();
    for (const auto& schema : j.at("schemas")) {
        config.schemas.push_back({schema.at("field").get<std::string>(), schema.at("values").get<std::vector<std::string>>()});
    }
    config.salary.mean = j.at("salary_mean").get<double>();
    config.salary.stddev = j.at("salary_stddev").get<double>();
    config.include_day = j.at("include_day").get<bool>();
    config.days = j.at("days").get<std::vector<int>>();
    config.validate();
    return config;
}

json to_json(const FeatureLayout& layout) {
    json spans = json::array();
    for (const auto& span : layout) spans.push_back({{"name", span.name}, {"offset", span.offset}, {"length", span.length}});
    return spans;
}

FeatureLayout layout_from_json(const json& j) {
    FeatureLayout layout;
    std::size_t expected_offset = 0;
    for (const auto& span : j) {
        LayoutSpan s{span.at("name").get<std::string>(), span.at("offset").get<std::size_t>(),
                     span.at("length").get<std::size_t>()};
        if (s.offset != expected_offset) throw DataError("layout spans do not tile the feature vector");
        expected_offset += s.length;
        layout.push_back(std::move(s));
    }
    return layout;
}

FeatureMatrix featurize(const Dataset& dataset, const SkillEmbeddingTable& table, const FusionConfig& config) {
    config.validate();
    if (dataset.splits.size() != dataset.size()) throw DataError("dataset has no split tags");
    const auto index = dataset.job_index();
    FeatureMatrix features;
    features.layout = make_layout(config);
    features.featurizer = to_json(config);
    const std::size_t width = layout_width(features.layout);
    features.values.resize(static_cast<Eigen::Index>(dataset.size()), static_cast<Eigen::Index>(width));
    features.keys.reserve(dataset.size());
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const auto& obs = dataset.observations[r];
        auto it = index.find(obs.job_id);
        if (it == index.end()) throw DataError("observation references unknown job '" + obs.job_id + "'");
        const auto fused = fuse(dataset.jobs[it->second], obs.t, table, config);
        features.values.row(static_cast<Eigen::Index>(r)) =
            Eigen::Map<const Eigen::RowVectorXd>(fused.values.data(), static_cast<Eigen::Index>(width));
        features.keys.push_back({obs.job_id, obs.t, dataset.splits[r], obs.jac});
    }
    return features;
}

void write_features(const std::string& path, const FeatureMatrix& features) {
    if (ends_with(path, ".csv")) {
        write_csv(path, features);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    const std::string header = json{{"layout", to_json(features.layout)}, {"featurizer", features.featurizer}}.dump();
    out.write(kMagic, sizeof(kMagic));
    put<std::uint64_t>(out, header.size());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    put<std::uint64_t>(out, features.rows());
    put<std::uint64_t>(out, features.width());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto& key = features.keys[r];
        put<std::uint32_t>(out, static_cast<std::uint32_t>(key.job_id.size()));
        out.write(key.job_id.data(), static_cast<std::streamsize>(key.job_id.size()));
        put<std::int32_t>(out, key.t);
        put<std::uint8_t>(out, static_cast<std::uint8_t>(key.split));
        put<std::int32_t>(out, key.jac);
        out.write(reinterpret_cast<const char*>(features.values.row(static_cast<Eigen::Index>(r)).data()),
                  static_cast<std::streamsize>(features.width() * sizeof(double)));
    }
}

FeatureMatrix read_features(const std::string& path) {
    if (ends_with(path, ".csv")) return read_csv(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    char magic[sizeof(kMagic)];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw DataError("'" + path + "' is not a feature file");
    const auto header_len = get<std::uint64_t>(in);
    std::string header(header_len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(header_len));
    if (!in) throw DataError("truncated feature file");
    const json meta = json::parse(header);
    FeatureMatrix features;
    features.layout = layout_from_json(meta.at("layout"));
    features.featurizer = meta.at("featurizer");
    const auto rows = get<std::uint64_t>(in);
    const auto width = get<std::uint64_t>(in);
    if (width != layout_width(features.layout)) throw DataError("feature width does not match layout");
    features.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
    features.keys.reserve(rows);
    for (std::uint64_t r = 0; r < rows; ++r) {
        FeatureRowKey key;
        key.job_id.resize(get<std::uint32_t>(in));
        in.read(key.job_id.data(), static_cast<std::streamsize>(key.job_id.size()));
        key.t = get<std::int32_t>(in);
        const auto split = get<std::uint8_t>(in);
        if (split > 2) throw DataError("invalid split tag in feature file");
        key.split = static_cast<Split>(split);
        key.jac = get<std::int32_t>(in);
        in.read(reinterpret_cast<char*>(features.values.row(static_cast<Eigen::Index>(r)).data()),
                static_cast<std::streamsize>(width * sizeof(double)));
        if (!in) throw DataError("truncated feature file");
        features.keys.push_back(std::move(key));
    }
    return features;
}

}  // namespace jacfc
