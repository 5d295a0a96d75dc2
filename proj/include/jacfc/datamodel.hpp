#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jacfc {

/// Raised for malformed or invalid input records. `line()` is 1-based, 0 when
/// the error is not tied to a specific line.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& message, std::size_t line = 0);

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct JobPosting {
    std::string job_id;
    std::string title;
    std::string company;
    std::string description;
    std::vector<std::string> skills;
    std::string job_type;
    std::string state;
    std::string channel;
    std::string job_level;
    std::string city;
    double latitude = 0.0;
    double longitude = 0.0;
    std::optional<double> salary;

    bool operator==(const JobPosting&) const = default;
};

/// Cumulative applicant count `jac` reached by day `t` of a posting.
struct Observation {
    std::string job_id;
    int t = 1;
    int jac = 0;

    bool operator==(const Observation&) const = default;
};

enum class Split : std::uint8_t { Train = 0, Test = 1, Val = 2 };

std::string_view to_string(Split split);
Split parse_split(std::string_view text);

struct Dataset {
    std::vector<JobPosting> jobs;
    std::vector<Observation> observations;
    /// One tag per observation; empty until a split has been assigned.
    std::vector<Split> splits;

    std::size_t size() const { return observations.size(); }
    bool has_splits() const { return !splits.empty(); }

    /// job_id -> index into `jobs`.
    std::unordered_map<std::string, std::size_t> job_index() const;
};

struct SkillEmbeddingTable {
    std::size_t dimension = 0;
    std::map<std::string, std::vector<double>, std::less<>> entries;

    const std::vector<double>* find(std::string_view skill) const;
};

/// Wraps an arbitrary longitude into (-180, 180].
double normalize_longitude(double degrees);

/// Throws DataError when the posting breaks a field invariant.
void validate_job(const JobPosting& job, std::size_t line = 0);

std::vector<JobPosting> load_jobs(const std::string& path);
std::vector<Observation> load_observations(const std::string& path, const std::set<std::string, std::less<>>& known_jobs);
/// Same checks except job references, for when no job file is at hand.
std::vector<Observation> load_observations(const std::string& path);
SkillEmbeddingTable load_skill_table(const std::string& path);

/// Stream parsers behind the loaders.
std::vector<JobPosting> parse_jobs(std::istream& in);
std::vector<Observation> parse_observations(std::istream& in, const std::set<std::string, std::less<>>* known_jobs);
SkillEmbeddingTable parse_skill_table(std::istream& in);

std::string job_to_json_line(const JobPosting& job);
std::string observation_to_json_line(const Observation& obs);

void write_jobs(const std::string& path, const std::vector<JobPosting>& jobs);
void write_observations(const std::string& path, const std::vector<Observation>& observations);
void write_skill_table(const std::string& path, const SkillEmbeddingTable& table);

/// `splits.csv`: header `job_id,split`, one row per job.
std::map<std::string, Split, std::less<>> load_splits(const std::string& path);
void write_splits(const std::string& path, const std::vector<std::pair<std::string, Split>>& rows);

/// Tags every observation with its job's split. Throws if a job has no split.
void apply_job_splits(Dataset& dataset, const std::map<std::string, Split, std::less<>>& by_job);

std::set<std::string, std::less<>> job_id_set(const std::vector<JobPosting>& jobs);

}  // namespace jacfc
