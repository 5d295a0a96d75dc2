#include "jacfc/featfusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jacfc/random.hpp"

namespace jacfc {

namespace {

constexpr std::uint64_t kCompanySalt = 0xC0;
constexpr std::uint64_t kTitleSalt = 0x717;
constexpr std::uint64_t kDescSalt = 0xDE5C;
constexpr std::uint64_t kSkillSalt = 0x5C111;

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool is_word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80 || c == '_';
}

void l2_normalize(std::span<double> v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
    }
}

void append(std::vector<double>& out, std::span<const double> block) { out.insert(out.end(), block.begin(), block.end()); }

}  // namespace

CategoricalSchema CategoricalSchema::from_values(std::string field, std::vector<std::string> observed) {
    std::sort(observed.begin(), observed.end());
    observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
    std::erase(observed, std::string(kUnknownValue));
    observed.emplace_back(kUnknownValue);
    return {std::move(field), std::move(observed)};
}

std::size_t CategoricalSchema::slot(std::string_view value) const {
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i] == value) return i;
    }
    return values.size() - 1;
}

void FusionConfig::validate() const {
    if (d_company == 0 || d_title == 0 || d_desc == 0 || skill_dim == 0) {
        throw std::invalid_argument("fusion dimensions must be >= 1");
    }
    if (schemas.size() != kCategoricalFields.size()) {
        throw std::invalid_argument("fusion config needs one schema per categorical field");
    }
    for (std::size_t f = 0; f < schemas.size(); ++f) {
        const auto& schema = schemas[f];
        if (schema.field != kCategoricalFields[f]) {
            throw std::invalid_argument("schema " + std::to_string(f) + " must describe '" + kCategoricalFields[f] + "'");
        }
        if (schema.values.empty()) {
            throw std::invalid_argument("schema '" + schema.field + "' needs at least the unknown slot");
        }
        auto sorted = schema.values;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("schema '" + schema.field + "' has duplicate values");
        }
    }
    if (!(salary.stddev > 0.0)) throw std::invalid_argument("salary stddev must be positive");
    if (include_day) {
        if (days.empty()) throw std::invalid_argument("include_day requires day values");
        auto sorted = days;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("day values must be unique");
        }
    }
}

FeatureLayout make_layout(const FusionConfig& config) {
    std::size_t categorical = 0;
    for (const auto& schema : config.schemas) categorical += schema.size();
    FeatureLayout layout;
    std::size_t offset = 0;
    auto add = [&](const char* name, std::size_t length) {
        layout.push_back({name, offset, length});
        offset += length;
    };
    add("E_t", config.d_company + config.d_title + config.d_desc);
    add("E_c", categorical);
    add("E_g", config.skill_dim);
    add("E_l", 3);
    add("N", 2);
    if (config.include_day) add("day", config.days.size());
    return layout;
}

std::size_t layout_width(const FeatureLayout& layout) {
    return layout.empty() ? 0 : layout.back().offset + layout.back().length;
}

std::array<double, 3> embed_location(double latitude, double longitude) {
    if (!(latitude >= -90.0 && latitude <= 90.0)) {
        throw std::invalid_argument("latitude out of range");
    }
    if (!(longitude > -180.0 && longitude <= 180.0)) {
        throw std::invalid_argument("longitude out of range");
    }
    const double theta = latitude * std::numbers::pi / 180.0;
    const double phi = longitude * std::numbers::pi / 180.0;
    // exact values at the poles; cos(pi/2) is 6e-17 in floating point
    if (latitude == 90.0) return {0.0, 0.0, 1.0};
    if (latitude == -90.0) return {0.0, 0.0, -1.0};
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), std::sin(theta)};
}

std::vector<double> encode_categorical(const JobPosting& job, std::span<const CategoricalSchema> schemas) {
    const std::array<const std::string*, 4> fields = {&job.job_type, &job.state, &job.channel, &job.job_level};
    std::vector<double> out;
    for (std::size_t f = 0; f < schemas.size() && f < fields.size(); ++f) {
        std::vector<double> block(schemas[f].size(), 0.0);
        block[schemas[f].slot(*fields[f])] = 1.0;
        append(out, block);
    }
    return out;
}

std::vector<double> hashed_skill_vector(std::string_view skill, std::size_t dimension) {
    Rng rng(fnv1a64(skill, kSkillSalt));
    std::vector<double> v(dimension);
    for (auto& x : v) x = rng.normal();
    l2_normalize(v);
    return v;
}

std::vector<double> embed_skills(std::span<const std::string> skills, const SkillEmbeddingTable& table,
                                 std::size_t dimension) {
    if (table.dimension != 0 && table.dimension != dimension) {
        throw std::invalid_argument("skill table dimension " + std::to_string(table.dimension) +
                                    " does not match configured dimension " + std::to_string(dimension));
    }
    std::vector<double> mean(dimension, 0.0);
    if (skills.empty()) return mean;
    for (const auto& skill : skills) {
        if (const auto* vec = table.find(skill)) {
            for (std::size_t i = 0; i < dimension; ++i) mean[i] += (*vec)[i];
        } else {
            const auto vec_hashed = hashed_skill_vector(skill, dimension);
            for (std::size_t i = 0; i < dimension; ++i) mean[i] += vec_hashed[i];
        }
    }
    for (auto& x : mean) x /= static_cast<double>(skills.size());
    return mean;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (is_word_char(c)) {
            current += lower(c);
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::vector<double> char_trigram_counts(std::string_view text, std::size_t buckets) {
    std::vector<double> counts(buckets, 0.0);
    if (text.empty()) return counts;
    std::string padded = "#";
    for (char c : text) padded += lower(c);
    padded += '#';
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        counts[fnv1a64(std::string_view(padded).substr(i, 3), kCompanySalt) % buckets] += 1.0;
    }
    return counts;
}

std::vector<double> word_counts(std::string_view text, std::size_t buckets, std::uint64_t salt) {
    std::vector<double> counts(buckets, 0.0);
    for (const auto& word : tokenize_words(text)) {
        counts[fnv1a64(word, salt) % buckets] += 1.0;
    }
    return counts;
}

std::vector<double> embed_text(std::string_view company, std::string_view title, std::string_view description,
                               const FusionConfig& config) {
    auto company_stream = char_trigram_counts(company, config.d_company);
    auto title_stream = word_counts(title, config.d_title, kTitleSalt);
    auto desc_stream = word_counts(description, config.d_desc, kDescSalt);
    l2_normalize(company_stream);
    l2_normalize(title_stream);
    l2_normalize(desc_stream);
    std::vector<double> out;
    out.reserve(company_stream.size() + title_stream.size() + desc_stream.size());
    append(out, company_stream);
    append(out, title_stream);
    append(out, desc_stream);
    return out;
}

std::array<double, 2> encode_salary(const std::optional<double>& salary, const SalaryStats& stats) {
    if (!salary) return {0.0, 0.0};
    return {(*salary - stats.mean) / stats.stddev, 1.0};
}

FusedFeatureVector fuse(const JobPosting& job, std::optional<int> t, const SkillEmbeddingTable& table,
                        const FusionConfig& config) {
    std::vector<double> day_block;
    if (config.include_day) {
        if (!t) throw std::invalid_argument("include_day is set but no day was given");
        auto it = std::find(config.days.begin(), config.days.end(), *t);
        if (it == config.days.end()) {
            throw std::invalid_argument("unlisted day " + std::to_string(*t));
        }
        day_block.assign(config.days.size(), 0.0);
        day_block[static_cast<std::size_t>(it - config.days.begin())] = 1.0;
    }

    FusedFeatureVector fused;
    fused.layout = make_layout(config);
    fused.values.reserve(layout_width(fused.layout));
    append(fused.values, embed_text(job.company, job.title, job.description, config));
    append(fused.values, encode_categorical(job, config.schemas));
    append(fused.values, embed_skills(job.skills, table, config.skill_dim));
    append(fused.values, embed_location(job.latitude, job.longitude));
    append(fused.values, encode_salary(job.salary, config.salary));
    append(fused.values, day_block);
    return fused;
}

FusionConfig fit_fusion_config(std::span<const JobPosting> training_jobs, FusionConfig base) {
    std::array<std::vector<std::string>, 4> observed;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n_salary = 0;
    for (const auto& job : training_jobs) {
        observed[0].push_back(job.job_type);
        observed[1].push_back(job.state);
        observed[2].push_back(job.channel);
        observed[3].push_back(job.job_level);
        if (job.salary) {
            sum += *job.salary;
            sum_sq += *job.salary * *job.salary;
            ++n_salary;
        }
    }
    base.schemas.clear();
    for (std::size_t f = 0; f < kCategoricalFields.size(); ++f) {
        base.schemas.push_back(CategoricalSchema::from_values(kCategoricalFields[f], std::move(observed[f])));
    }
    base.salary = SalaryStats{};
    if (n_salary > 0) {
        const double mean = sum / static_cast<double>(n_salary);
        const double var = std::max(0.0, sum_sq / static_cast<double>(n_salary) - mean * mean);
        base.salary.mean = mean;
        base.salary.stddev = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return base;
}

}  // namespace jacfc
