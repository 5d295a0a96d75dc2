#include <gtest/gtest.h>

#include <functional>
#include <sstream>

#include <json.hpp>

#include "jacfc/datamodel.hpp"
#include "test_support.hpp"

namespace jacfc {
namespace {

JobPosting sample_job(const std::string& id) {
    JobPosting job;
    job.job_id = id;
    job.title = "forklift operator";
    job.company = "Acme Logistics";
    job.description = "Night shift in a warehouse.";
    job.skills = {"forklift", "inventory"};
    job.job_type = "full_time";
    job.state = "AZ";
    job.channel = "web";
    job.job_level = "entry";
    job.city = "Tucson";
    job.latitude = 32.22;
    job.longitude = -110.97;
    job.salary = 38000.0;
    return job;
}

std::string expect_data_error(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const DataError& e) {
        return e.what();
    }
    ADD_FAILURE() << "expected DataError";
    return {};
}

TEST(JobLoader, EmptyInputGivesEmptyList) {
    std::istringstream in("");
    EXPECT_TRUE(parse_jobs(in).empty());
}

TEST(JobLoader, LatitudeOutOfRangeReportsLine) {
    auto record = nlohmann::json::parse(job_to_json_line(sample_job("j1")));
    record["latitude"] = 91;
    std::istringstream in(record.dump() + "\n");
    try {
        parse_jobs(in);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("latitude out of range"), std::string::npos);
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(JobLoader, DuplicateIdIsNamed) {
    std::istringstream in(job_to_json_line(sample_job("j1")) + "\n" + job_to_json_line(sample_job("j1")) + "\n");
    const auto msg = expect_data_error([&] { parse_jobs(in); });
    EXPECT_NE(msg.find("duplicate"), std::string::npos);
    EXPECT_NE(msg.find("j1"), std::string::npos);
}

TEST(JobLoader, RejectsUnknownAndMissingKeys) {
    auto record = nlohmann::json::parse(job_to_json_line(sample_job("j1")));
    auto extra = record;
    extra["bonus"] = 1;
    std::istringstream a(extra.dump());
    EXPECT_NE(expect_data_error([&] { parse_jobs(a); }).find("bonus"), std::string::npos);
    auto missing = record;
    missing.erase("city");
    std::istringstream b(missing.dump());
    EXPECT_NE(expect_data_error([&] { parse_jobs(b); }).find("city"), std::string::npos);
}

TEST(JobLoader, NegativeSalaryRejectedAndNullAccepted) {
    auto record = nlohmann::json::parse(job_to_json_line(sample_job("j1")));
    record["salary"] = -1.0;
    std::istringstream a(record.dump());
    EXPECT_THROW(parse_jobs(a), DataError);
    record["salary"] = nullptr;
    std::istringstream b(record.dump());
    const auto jobs = parse_jobs(b);
    ASSERT_EQ(jobs.size(), 1u);
    EXPECT_FALSE(jobs[0].salary.has_value());
}

TEST(JobLoader, LongitudeIsWrapped) {
    EXPECT_DOUBLE_EQ(normalize_longitude(180.0), 180.0);
    EXPECT_DOUBLE_EQ(normalize_longitude(-180.0), 180.0);
    EXPECT_DOUBLE_EQ(normalize_longitude(190.0), -170.0);
    EXPECT_DOUBLE_EQ(normalize_longitude(-540.0), 180.0);
}

TEST(JobLoader, RoundTripThroughFile) {
    testing::TempDir dir;
    std::vector<JobPosting> jobs = {sample_job("a"), sample_job("b")};
    jobs[1].salary.reset();
    jobs[1].skills.clear();
    write_jobs(dir.file("jobs.jsonl"), jobs);
    EXPECT_EQ(load_jobs(dir.file("jobs.jsonl")), jobs);
}

TEST(ObservationLoader, ValidRecord) {
    std::set<std::string, std::less<>> known = {"j1"};
    std::istringstream in(R"({"job_id":"j1","t":1,"jac":0})");
    const auto obs = parse_observations(in, &known);
    ASSERT_EQ(obs.size(), 1u);
    EXPECT_EQ(obs[0], (Observation{"j1", 1, 0}));
}

TEST(ObservationLoader, DanglingReference) {
    std::set<std::string, std::less<>> known = {"j1"};
    std::istringstream in(R"({"job_id":"zz","t":1,"jac":0})");
    EXPECT_NE(expect_data_error([&] { parse_observations(in, &known); }).find("dangling"), std::string::npos);
}

TEST(ObservationLoader, HorizonBoundary) {
    std::set<std::string, std::less<>> known = {"j1"};
    std::istringstream in(R"({"job_id":"j1","t":0,"jac":2})");
    EXPECT_NE(expect_data_error([&] { parse_observations(in, &known); }).find("horizon"), std::string::npos);
}

TEST(ObservationLoader, CountsMustNotDecrease) {
    std::istringstream in("{\"job_id\":\"j1\",\"t\":7,\"jac\":2}\n{\"job_id\":\"j1\",\"t\":3,\"jac\":3}\n");
    EXPECT_THROW(parse_observations(in, nullptr), DataError);
    std::istringstream dup("{\"job_id\":\"j1\",\"t\":3,\"jac\":2}\n{\"job_id\":\"j1\",\"t\":3,\"jac\":2}\n");
    EXPECT_THROW(parse_observations(dup, nullptr), DataError);
    std::istringstream neg(R"({"job_id":"j1","t":3,"jac":-1})");
    EXPECT_THROW(parse_observations(neg, nullptr), DataError);
}

TEST(SkillTable, UniformRows) {
    std::istringstream in("a\t1\t2\t3\nb\t4\t5\t6\n");
    const auto table = parse_skill_table(in);
    EXPECT_EQ(table.dimension, 3u);
    ASSERT_NE(table.find("b"), nullptr);
    EXPECT_EQ(*table.find("b"), (std::vector<double>{4, 5, 6}));
    EXPECT_EQ(table.find("c"), nullptr);
}

TEST(SkillTable, RaggedAndEmpty) {
    std::istringstream ragged("a\t1\t2\t3\nb\t4\t5\t6\t7\n");
    EXPECT_NE(expect_data_error([&] { parse_skill_table(ragged); }).find("ragged row"), std::string::npos);
    std::istringstream empty("");
    EXPECT_NE(expect_data_error([&] { parse_skill_table(empty); }).find("empty table"), std::string::npos);
    std::istringstream text("a\t1\tx\n");
    EXPECT_THROW(parse_skill_table(text), DataError);
}

TEST(Splits, RoundTripAndApply) {
    testing::TempDir dir;
    write_splits(dir.file("splits.csv"), {{"a", Split::Train}, {"b", Split::Val}});
    const auto splits = load_splits(dir.file("splits.csv"));
    Dataset dataset;
    dataset.observations = {{"a", 1, 1}, {"b", 1, 2}, {"a", 3, 2}};
    apply_job_splits(dataset, splits);
    EXPECT_EQ(dataset.splits, (std::vector<Split>{Split::Train, Split::Val, Split::Train}));
    dataset.observations.push_back({"c", 1, 0});
    EXPECT_THROW(apply_job_splits(dataset, splits), DataError);
}

TEST(Splits, ParseNames) {
    for (Split s : {Split::Train, Split::Test, Split::Val}) EXPECT_EQ(parse_split(to_string(s)), s);
    EXPECT_THROW(parse_split("holdout"), DataError);
}

}  // namespace
}  // namespace jacfc
