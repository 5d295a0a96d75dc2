#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jacfc/datamodel.hpp"
#include "jacfc/feature_io.hpp"

namespace jacfc {

/// Sentence templates for text casting. `{}` placeholders are filled in order.
/// The modality order of a paragraph is fixed: text, categorical, skills,
/// location, numeric, day.
struct TemplateConfig {
    std::string version = "v1";
    std::string title = "Job title: {}.";
    std::string company = "Company: {}.";
    std::string description = "Description: {}.";
    std::string categorical = "Job type: {}, state: {}, channel: {}, job level: {}.";
    std::string skills = "Required skills: {}.";
    std::string location = "The job is located in {}.";
    std::string salary = "The salary is {}.";
    std::string day = "This job has been posted for {} days.";
    std::string delimiter = ". ";
};

enum class Modality { Categorical, Skills, Location, Numeric, Day };

struct CategoricalPayload {
    std::string job_type, state, channel, job_level;
};
struct LocationPayload {
    std::string city, state;
};

using CastPayload = std::variant<CategoricalPayload, std::vector<std::string>, LocationPayload, std::optional<double>,
                                 std::optional<int>>;

/// Renders one modality as a sentence. An absent payload yields "".
std::string text_cast(Modality modality, const CastPayload& value, const TemplateConfig& templates);

/// Decimal digits of a number without exponent or trailing zeros.
std::string format_number(double value);

struct Paragraph {
    std::string text;
    std::string job_id;
    std::optional<int> t;
};

/// The sentences of a job in paragraph order, empty ones dropped.
std::vector<std::string> job_sentences(const JobPosting& job, std::optional<int> t, const TemplateConfig& templates);

Paragraph serialize_job(const JobPosting& job, std::optional<int> t, const TemplateConfig& templates);

struct LmRecord {
    std::string job_id;
    int t = 0;
    std::string paragraph;
    int label = 0;
};

/// Writes `<prefix>.{train,test,val}.jsonl`, lines ordered by (job_id, t).
/// With `include_day` the paragraph carries the day sentence.
void export_lm_dataset(const Dataset& dataset, const TemplateConfig& templates, const std::string& prefix,
                       bool include_day);

std::vector<LmRecord> read_lm_dataset(const std::string& path);

using EmbeddingKey = std::pair<std::string, int>;

struct EmbeddingMap {
    std::size_t dimension = 0;
    std::map<EmbeddingKey, std::vector<double>> vectors;
};

/// TSV `job_id<TAB>t<TAB>v1..vk`.
EmbeddingMap import_embeddings(const std::string& path);
EmbeddingMap parse_embeddings(std::istream& in);

/// Joins embeddings to split-tagged observations as a feature matrix with a
/// single `emb` span. Observations without an embedding are an error.
FeatureMatrix embeddings_to_features(const EmbeddingMap& embeddings, const Dataset& dataset);

}  // namespace jacfc
