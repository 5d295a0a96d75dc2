#include "jacfc/datamodel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jacfc {

using nlohmann::json;

namespace {

const std::set<std::string, std::less<>> kJobKeys = {
    "job_id", "title", "company", "description", "skills", "job_type", "state",
    "channel", "job_level", "city", "latitude", "longitude", "salary"};

const std::set<std::string, std::less<>> kObservationKeys = {"job_id", "t", "jac"};

std::string line_suffix(std::size_t line) {
    return line == 0 ? std::string() : " at line " + std::to_string(line);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    return out;
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

json parse_line(const std::string& line, std::size_t line_no) {
    try {
        json value = json::parse(line);
        if (!value.is_object()) {
            throw DataError("expected a JSON object" + line_suffix(line_no), line_no);
        }
        return value;
    } catch (const json::parse_error& e) {
        throw DataError(std::string("JSON parse error") + line_suffix(line_no) + ": " + e.what(), line_no);
    }
}

void check_keys(const json& record, const std::set<std::string, std::less<>>& allowed, std::size_t line_no) {
    for (const auto& item : record.items()) {
        if (!allowed.contains(item.key())) {
            throw DataError("unexpected key '" + item.key() + "'" + line_suffix(line_no), line_no);
        }
    }
}

const json& require(const json& record, const char* key, std::size_t line_no) {
    auto it = record.find(key);
    if (it == record.end()) {
        throw DataError(std::string("missing key '") + key + "'" + line_suffix(line_no), line_no);
    }
    return *it;
}

std::string require_string(const json& record, const char* key, std::size_t line_no) {
    const json& value = require(record, key, line_no);
    if (!value.is_string()) {
        throw DataError(std::string("field '") + key + "' must be a string" + line_suffix(line_no), line_no);
    }
    return value.get<std::string>();
}

double require_number(const json& record, const char* key, std::size_t line_no) {
    const json& value = require(record, key, line_no);
    if (!value.is_number()) {
        throw DataError(std::string("field '") + key + "' must be a number" + line_suffix(line_no), line_no);
    }
    return value.get<double>();
}

long long require_integer(const json& record, const char* key, std::size_t line_no) {
    const json& value = require(record, key, line_no);
    if (value.is_number_integer()) {
        return value.get<long long>();
    }
    if (value.is_number_float()) {
        double v = value.get<double>();
        if (std::isfinite(v) && std::floor(v) == v) {
            return static_cast<long long>(v);
        }
    }
    throw DataError(std::string("field '") + key + "' must be an integer" + line_suffix(line_no), line_no);
}

JobPosting job_from_json(const json& record, std::size_t line_no) {
    check_keys(record, kJobKeys, line_no);
    JobPosting job;
    job.job_id = require_string(record, "job_id", line_no);
    job.title = require_string(record, "title", line_no);
    job.company = require_string(record, "company", line_no);
    job.description = require_string(record, "description", line_no);
    const json& skills = require(record, "skills", line_no);
    if (!skills.is_array()) {
        throw DataError("field 'skills' must be an array" + line_suffix(line_no), line_no);
    }
    for (const auto& skill : skills) {
        if (!skill.is_string()) {
            throw DataError("field 'skills' must contain strings" + line_suffix(line_no), line_no);
        }
        job.skills.push_back(skill.get<std::string>());
    }
    job.job_type = require_string(record, "job_type", line_no);
    job.state = require_string(record, "state", line_no);
    job.channel = require_string(record, "channel", line_no);
    job.job_level = require_string(record, "job_level", line_no);
    job.city = require_string(record, "city", line_no);
    job.latitude = require_number(record, "latitude", line_no);
    double longitude = require_number(record, "longitude", line_no);
    if (!std::isfinite(longitude)) {
        throw DataError("longitude out of range" + line_suffix(line_no), line_no);
    }
    job.longitude = normalize_longitude(longitude);
    if (auto it = record.find("salary"); it != record.end() && !it->is_null()) {
        if (!it->is_number()) {
            throw DataError("field 'salary' must be a number" + line_suffix(line_no), line_no);
        }
        job.salary = it->get<double>();
    }
    validate_job(job, line_no);
    return job;
}

}  // namespace

DataError::DataError(const std::string& message, std::size_t line) : std::runtime_error(message), line_(line) {}

std::string_view to_string(Split split) {
    switch (split) {
        case Split::Train:
            return "train";
        case Split::Test:
            return "test";
        case Split::Val:
            return "val";
    }
    return "train";
}

Split parse_split(std::string_view text) {
    if (text == "train") return Split::Train;
    if (text == "test") return Split::Test;
    if (text == "val") return Split::Val;
    throw DataError("unknown split '" + std::string(text) + "'");
}

std::unordered_map<std::string, std::size_t> Dataset::job_index() const {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        index.emplace(jobs[i].job_id, i);
    }
    return index;
}

const std::vector<double>* SkillEmbeddingTable::find(std::string_view skill) const {
    auto it = entries.find(skill);
    return it == entries.end() ? nullptr : &it->second;
}

double normalize_longitude(double degrees) {
    double wrapped = std::fmod(degrees, 360.0);
    if (wrapped > 180.0) {
        wrapped -= 360.0;
    } else if (wrapped <= -180.0) {
        wrapped += 360.0;
    }
    return wrapped;
}

void validate_job(const JobPosting& job, std::size_t line) {
    if (job.job_id.empty()) {
        throw DataError("job_id must be non-empty" + line_suffix(line), line);
    }
    if (!(job.latitude >= -90.0 && job.latitude <= 90.0)) {
        throw DataError("latitude out of range" + line_suffix(line), line);
    }
    if (!(job.longitude > -180.0 && job.longitude <= 180.0)) {
        throw DataError("longitude out of range" + line_suffix(line), line);
    }
    if (job.salary && !(*job.salary >= 0.0 && std::isfinite(*job.salary))) {
        throw DataError("salary must be non-negative" + line_suffix(line), line);
    }
}

std::vector<JobPosting> parse_jobs(std::istream& in) {
    std::vector<JobPosting> jobs;
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        JobPosting job = job_from_json(parse_line(line, line_no), line_no);
        if (!seen.insert(job.job_id).second) {
            throw DataError("duplicate job_id '" + job.job_id + "'" + line_suffix(line_no), line_no);
        }
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::vector<Observation> parse_observations(std::istream& in, const std::set<std::string, std::less<>>* known_jobs) {
    std::vector<Observation> observations;
    // (job_id) -> (t, jac, line) of each record, to check monotonicity after the pass
    std::map<std::string, std::map<int, std::pair<int, std::size_t>>, std::less<>> per_job;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        json record = parse_line(line, line_no);
        check_keys(record, kObservationKeys, line_no);
        Observation obs;
        obs.job_id = require_string(record, "job_id", line_no);
        long long t = require_integer(record, "t", line_no);
        long long jac = require_integer(record, "jac", line_no);
        if (known_jobs && !known_jobs->contains(obs.job_id)) {
            throw DataError("dangling job_id '" + obs.job_id + "'" + line_suffix(line_no), line_no);
        }
        if (t < 1 || t > 1'000'000) {
            throw DataError("horizon t must be >= 1" + line_suffix(line_no), line_no);
        }
        if (jac < 0 || jac > 1'000'000'000) {
            throw DataError("jac must be non-negative" + line_suffix(line_no), line_no);
        }
        obs.t = static_cast<int>(t);
        obs.jac = static_cast<int>(jac);
        auto [it, inserted] = per_job[obs.job_id].emplace(obs.t, std::make_pair(obs.jac, line_no));
        if (!inserted) {
            throw DataError("duplicate observation for job '" + obs.job_id + "' at t=" + std::to_string(obs.t) +
                                line_suffix(line_no),
                            line_no);
        }
        observations.push_back(std::move(obs));
    }
    for (const auto& [job_id, series] : per_job) {
        int previous = -1;
        for (const auto& [t, entry] : series) {
            if (entry.first < previous) {
                throw DataError("jac decreases in t for job '" + job_id + "' at t=" + std::to_string(t) +
                                    line_suffix(entry.second),
                                entry.second);
            }
            previous = entry.first;
        }
    }
    return observations;
}

SkillEmbeddingTable parse_skill_table(std::istream& in) {
    SkillEmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            auto tab = rest.find('\t');
            fields.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        if (fields.size() < 2 || fields[0].empty()) {
            throw DataError("skill row needs a name and at least one component" + line_suffix(line_no), line_no);
        }
        std::vector<double> vec;
        vec.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double value = 0.0;
            auto field = fields[i];
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
                throw DataError("non-numeric component '" + std::string(field) + "'" + line_suffix(line_no), line_no);
            }
            vec.push_back(value);
        }
        if (table.dimension == 0) {
            table.dimension = vec.size();
        } else if (vec.size() != table.dimension) {
            throw DataError("ragged row: expected " + std::to_string(table.dimension) + " components, got " +
                                std::to_string(vec.size()) + line_suffix(line_no),
                            line_no);
        }
        std::string name(fields[0]);
        if (!table.entries.emplace(name, std::move(vec)).second) {
            throw DataError("duplicate skill '" + name + "'" + line_suffix(line_no), line_no);
        }
    }
    if (table.dimension == 0) {
        throw DataError("empty table");
    }
    return table;
}

std::vector<JobPosting> load_jobs(const std::string& path) {
    auto in = open_input(path);
    return parse_jobs(in);
}

std::vector<Observation> load_observations(const std::string& path, const std::set<std::string, std::less<>>& known_jobs) {
    auto in = open_input(path);
    return parse_observations(in, &known_jobs);
}

std::vector<Observation> load_observations(const std::string& path) {
    auto in = open_input(path);
    return parse_observations(in, nullptr);
}

SkillEmbeddingTable load_skill_table(const std::string& path) {
    auto in = open_input(path);
    return parse_skill_table(in);
}

std::string job_to_json_line(const JobPosting& job) {
    json record = {
        {"job_id", job.job_id},
        {"title", job.title},
        {"company", job.company},
        {"description", job.description},
        {"skills", job.skills},
        {"job_type", job.job_type},
        {"state", job.state},
        {"channel", job.channel},
        {"job_level", job.job_level},
        {"city", job.city},
        {"latitude", job.latitude},
        {"longitude", job.longitude},
    };
    if (job.salary) {
        record["salary"] = *job.salary;
    }
    return record.dump();
}

std::string observation_to_json_line(const Observation& obs) {
    json record = {{"job_id", obs.job_id}, {"t", obs.t}, {"jac", obs.jac}};
    return record.dump();
}

void write_jobs(const std::string& path, const std::vector<JobPosting>& jobs) {
    auto out = open_output(path);
    for (const auto& job : jobs) {
        out << job_to_json_line(job) << '\n';
    }
}

void write_observations(const std::string& path, const std::vector<Observation>& observations) {
    auto out = open_output(path);
    for (const auto& obs : observations) {
        out << observation_to_json_line(obs) << '\n';
    }
}

void write_skill_table(const std::string& path, const SkillEmbeddingTable& table) {
    auto out = open_output(path);
    char buffer[64];
    for (const auto& [skill, vec] : table.entries) {
        out << skill;
        for (double v : vec) {
            auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
            out << '\t' << std::string_view(buffer, static_cast<std::size_t>(ptr - buffer));
        }
        out << '\n';
    }
}

std::map<std::string, Split, std::less<>> load_splits(const std::string& path) {
    auto in = open_input(path);
    std::map<std::string, Split, std::less<>> splits;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line) || (line_no == 1 && line == "job_id,split")) {
            continue;
        }
        auto comma = line.rfind(',');
        if (comma == std::string::npos) {
            throw DataError("expected 'job_id,split'" + line_suffix(line_no), line_no);
        }
        std::string job_id = line.substr(0, comma);
        Split split;
        try {
            split = parse_split(std::string_view(line).substr(comma + 1));
        } catch (const DataError& e) {
            throw DataError(std::string(e.what()) + line_suffix(line_no), line_no);
        }
        if (!splits.emplace(job_id, split).second) {
            throw DataError("duplicate job_id '" + job_id + "' in splits" + line_suffix(line_no), line_no);
        }
    }
    return splits;
}

void write_splits(const std::string& path, const std::vector<std::pair<std::string, Split>>& rows) {
    auto out = open_output(path);
    out << "job_id,split\n";
    for (const auto& [job_id, split] : rows) {
        out << job_id << ',' << to_string(split) << '\n';
    }
}

void apply_job_splits(Dataset& dataset, const std::map<std::string, Split, std::less<>>& by_job) {
    std::vector<Split> tags;
    tags.reserve(dataset.observations.size());
    for (const auto& obs : dataset.observations) {
        auto it = by_job.find(obs.job_id);
        if (it == by_job.end()) {
            throw DataError("no split assigned for job '" + obs.job_id + "'");
        }
        tags.push_back(it->second);
    }
    dataset.splits = std::move(tags);
}

std::set<std::string, std::less<>> job_id_set(const std::vector<JobPosting>& jobs) {
    std::set<std::string, std::less<>> ids;
    for (const auto& job : jobs) {
        ids.insert(job.job_id);
    }
    return ids;
}

}  // namespace jacfc
