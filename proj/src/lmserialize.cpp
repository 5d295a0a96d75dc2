#include "jacfc/lmserialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace jacfc {

using nlohmann::json;

namespace {

std::string trim_sentence_end(std::string_view text) {
    std::size_t end = text.size();
    while (end > 0 && (text[end - 1] == '.' || std::isspace(static_cast<unsigned char>(text[end - 1])))) --end;
    std::size_t begin = 0;
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    return std::string(text.substr(begin, end - begin));
}

std::string fill(std::string_view pattern, const std::vector<std::string>& args) {
    std::string out;
    std::size_t next = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] == '{' && i + 1 < pattern.size() && pattern[i + 1] == '}') {
            if (next < args.size()) out += args[next];
            ++next;
            ++i;
        } else {
            out += pattern[i];
        }
    }
    return out;
}

std::string sentence(std::string_view pattern, std::string_view value) {
    const auto cleaned = trim_sentence_end(value);
    return cleaned.empty() ? std::string() : fill(pattern, {cleaned});
}

std::string or_unknown(const std::string& value) { return value.empty() ? std::string("unknown") : value; }

}  // namespace

std::string format_number(double value) {
    if (std::isfinite(value) && std::floor(value) == value && std::fabs(value) < 1e15) {
        return std::to_string(static_cast<long long>(value));
    }
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed);
    return std::string(buffer, ptr);
}

std::string text_cast(Modality modality, const CastPayload& value, const TemplateConfig& templates) {
    switch (modality) {
        case Modality::Categorical: {
            const auto& c = std::get<CategoricalPayload>(value);
            if (c.job_type.empty() && c.state.empty() && c.channel.empty() && c.job_level.empty()) return {};
            return fill(templates.categorical,
                        {or_unknown(c.job_type), or_unknown(c.state), or_unknown(c.channel), or_unknown(c.job_level)});
        }
        case Modality::Skills: {
            const auto& skills = std::get<std::vector<std::string>>(value);
            std::string joined;
            for (const auto& skill : skills) {
                if (skill.empty()) continue;
                if (!joined.empty()) joined += ", ";
                joined += skill;
            }
            return joined.empty() ? std::string() : fill(templates.skills, {joined});
        }
        case Modality::Location: {
            const auto& loc = std::get<LocationPayload>(value);
            std::string where = loc.city;
            if (!loc.state.empty()) where += (where.empty() ? "" : ", ") + loc.state;
            return where.empty() ? std::string() : fill(templates.location, {where});
        }
        case Modality::Numeric: {
            const auto& salary = std::get<std::optional<double>>(value);
            return salary ? fill(templates.salary, {format_number(*salary)}) : std::string();
        }
        case Modality::Day: {
            const auto& day = std::get<std::optional<int>>(value);
            return day ? fill(templates.day, {std::to_string(*day)}) : std::string();
        }
    }
    return {};
}

std::vector<std::string> job_sentences(const JobPosting& job, std::optional<int> t, const TemplateConfig& templates) {
    std::vector<std::string> sentences = {
        sentence(templates.title, job.title),
        sentence(templates.company, job.company),
        sentence(templates.description, job.description),
        text_cast(Modality::Categorical, CategoricalPayload{job.job_type, job.state, job.channel, job.job_level},
                  templates),
        text_cast(Modality::Skills, job.skills, templates),
        text_cast(Modality::Location, LocationPayload{job.city, job.state}, templates),
        text_cast(Modality::Numeric, job.salary, templates),
        text_cast(Modality::Day, t, templates),
    };
    std::erase_if(sentences, [](const std::string& s) { return s.empty(); });
    return sentences;
}

Paragraph serialize_job(const JobPosting& job, std::optional<int> t, const TemplateConfig& templates) {
    Paragraph paragraph;
    paragraph.job_id = job.job_id;
    paragraph.t = t;
    const auto sentences = job_sentences(job, t, templates);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i > 0) paragraph.text += templates.delimiter;
        paragraph.text += trim_sentence_end(sentences[i]);
    }
    if (!paragraph.text.empty()) paragraph.text += '.';
    return paragraph;
}

void export_lm_dataset(const Dataset& dataset, const TemplateConfig& templates, const std::string& prefix,
                       bool include_day) {
    if (dataset.splits.size() != dataset.size()) throw DataError("dataset has no split tags");
    const auto index = dataset.job_index();
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& oa = dataset.observations[a];
        const auto& ob = dataset.observations[b];
        return std::tie(oa.job_id, oa.t) < std::tie(ob.job_id, ob.t);
    });
    std::ofstream outs[3];
    for (Split split : {Split::Train, Split::Test, Split::Val}) {
        const std::string path = prefix + "." + std::string(to_string(split)) + ".jsonl";
        auto& out = outs[static_cast<int>(split)];
        out.open(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + path + "'");
    }
    for (std::size_t i : order) {
        const auto& obs = dataset.observations[i];
        auto it = index.find(obs.job_id);
        if (it == index.end()) throw DataError("observation references unknown job '" + obs.job_id + "'");
        const auto paragraph =
            serialize_job(dataset.jobs[it->second], include_day ? std::optional<int>(obs.t) : std::nullopt, templates);
        json line = {{"job_id", obs.job_id}, {"t", obs.t}, {"paragraph", paragraph.text}, {"label", obs.jac}};
        outs[static_cast<int>(dataset.splits[i])] << line.dump() << '\n';
    }
    for (auto& out : outs) {
        out.flush();
        if (!out) throw DataError("I/O failure writing LM dataset");
    }
}

std::vector<LmRecord> read_lm_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<LmRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            records.push_back({j.at("job_id").get<std::string>(), j.at("t").get<int>(),
                               j.at("paragraph").get<std::string>(), j.at("label").get<int>()});
        } catch (const json::exception& e) {
            throw DataError("bad LM record at line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
    }
    return records;
}

EmbeddingMap parse_embeddings(std::istream& in) {
    EmbeddingMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            auto tab = rest.find('\t');
            fields.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        const std::string where = " at line " + std::to_string(line_no);
        if (fields.size() < 3) throw DataError("embedding row needs job_id, t and at least one value" + where, line_no);
        int t = 0;
        auto [tp, tec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), t);
        if (tec != std::errc() || tp != fields[1].data() + fields[1].size()) {
            throw DataError("non-integer day '" + std::string(fields[1]) + "'" + where, line_no);
        }
        std::vector<double> vec;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
            if (ec != std::errc() || ptr != fields[i].data() + fields[i].size()) {
                throw DataError("non-numeric component '" + std::string(fields[i]) + "'" + where, line_no);
            }
            vec.push_back(v);
        }
        if (map.dimension == 0) {
            map.dimension = vec.size();
        } else if (vec.size() != map.dimension) {
            throw DataError("ragged row: expected " + std::to_string(map.dimension) + " components, got " +
                                std::to_string(vec.size()) + where,
                            line_no);
        }
        EmbeddingKey key{std::string(fields[0]), t};
        if (!map.vectors.emplace(key, std::move(vec)).second) {
            throw DataError("duplicate embedding key (" + key.first + ", " + std::to_string(t) + ")" + where, line_no);
        }
    }
    return map;
}

EmbeddingMap import_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_embeddings(in);
}

FeatureMatrix embeddings_to_features(const EmbeddingMap& embeddings, const Dataset& dataset) {
    if (dataset.splits.size() != dataset.size()) throw DataError("dataset has no split tags");
    FeatureMatrix features;
    features.layout = {{"emb", 0, embeddings.dimension}};
    features.featurizer = nullptr;
    features.values.resize(static_cast<Eigen::Index>(dataset.size()), static_cast<Eigen::Index>(embeddings.dimension));
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const auto& obs = dataset.observations[r];
        auto it = embeddings.vectors.find({obs.job_id, obs.t});
        if (it == embeddings.vectors.end()) {
            throw DataError("no embedding for (" + obs.job_id + ", " + std::to_string(obs.t) + ")");
        }
        for (std::size_t c = 0; c < embeddings.dimension; ++c) {
            features.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = it->second[c];
        }
        features.keys.push_back({obs.job_id, obs.t, dataset.splits[r], obs.jac});
    }
    return features;
}

}  // namespace jacfc
