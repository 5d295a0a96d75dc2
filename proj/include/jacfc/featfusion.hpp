#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jacfc/datamodel.hpp"

namespace jacfc {

inline constexpr std::array<const char*, 4> kCategoricalFields = {"job_type", "state", "channel", "job_level"};
inline constexpr const char* kUnknownValue = "<unknown>";

/// Ordered values of one categorical field. The last slot is always the
/// unknown slot.
struct CategoricalSchema {
    std::string field;
    std::vector<std::string> values;

    /// Builds a schema from observed values (sorted, deduplicated) plus the
    /// unknown slot.
    static CategoricalSchema from_values(std::string field, std::vector<std::string> observed);

    std::size_t size() const { return values.size(); }
    std::size_t slot(std::string_view value) const;
};

/// Salary z-normalization statistics, fitted on training jobs only.
struct SalaryStats {
    double mean = 0.0;
    double stddev = 1.0;
};

struct FusionConfig {
    std::size_t d_company = 64;
    std::size_t d_title = 128;
    std::size_t d_desc = 256;
    /// One schema per entry of kCategoricalFields, same order.
    std::vector<CategoricalSchema> schemas;
    std::size_t skill_dim = 32;
    SalaryStats salary;
    bool include_day = false;
    std::vector<int> days;

    void validate() const;
};

struct LayoutSpan {
    std::string name;
    std::size_t offset = 0;
    std::size_t length = 0;

    bool operator==(const LayoutSpan&) const = default;
};

using FeatureLayout = std::vector<LayoutSpan>;

/// Layout of the fused vector: E_t, E_c, E_g, E_l, N and optionally day.
FeatureLayout make_layout(const FusionConfig& config);
std::size_t layout_width(const FeatureLayout& layout);

struct FusedFeatureVector {
    std::vector<double> values;
    FeatureLayout layout;
};

/// Unit vector (cos(lat)cos(lon), cos(lat)sin(lon), sin(lat)); degrees in.
std::array<double, 3> embed_location(double latitude, double longitude);

std::vector<double> encode_categorical(const JobPosting& job, std::span<const CategoricalSchema> schemas);

/// Mean of the skill vectors. Skills missing from `table` contribute a unit
/// vector seeded by a hash of the skill name.
std::vector<double> embed_skills(std::span<const std::string> skills, const SkillEmbeddingTable& table,
                                 std::size_t dimension);

/// Deterministic pseudo-random unit vector for a skill name.
std::vector<double> hashed_skill_vector(std::string_view skill, std::size_t dimension);

/// Hashed multi-stream text embedding: company character trigrams, title
/// words, description words; each stream L2-normalized when nonzero.
std::vector<double> embed_text(std::string_view company, std::string_view title, std::string_view description,
                               const FusionConfig& config);

/// Bucket counts of one stream before normalization (exposed for testing).
std::vector<double> char_trigram_counts(std::string_view text, std::size_t buckets);
std::vector<double> word_counts(std::string_view text, std::size_t buckets, std::uint64_t salt);
std::vector<std::string> tokenize_words(std::string_view text);

/// [z-score, presence]; absent salary gives (0, 0).
std::array<double, 2> encode_salary(const std::optional<double>& salary, const SalaryStats& stats);

FusedFeatureVector fuse(const JobPosting& job, std::optional<int> t, const SkillEmbeddingTable& table,
                        const FusionConfig& config);

/// Derives categorical schemas and salary statistics from the given jobs
/// (normally the training split).
FusionConfig fit_fusion_config(std::span<const JobPosting> training_jobs, FusionConfig base);

}  // namespace jacfc
