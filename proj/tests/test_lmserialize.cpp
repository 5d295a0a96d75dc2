#include <gtest/gtest.h>

#include <sstream>

#include "jacfc/lmserialize.hpp"
#include "jacfc/synthgen.hpp"
#include "test_support.hpp"

namespace jacfc {
namespace {

const TemplateConfig kTemplates;

JobPosting full_job() {
    JobPosting job;
    job.job_id = "j1";
    job.title = "Welder";
    job.company = "Desert Metal";
    job.description = "Shop work";
    job.skills = {"welding", "forklift"};
    job.job_type = "full_time";
    job.state = "AZ";
    job.channel = "web";
    job.job_level = "entry";
    job.city = "Tucson";
    job.latitude = 32.2;
    job.longitude = -110.9;
    job.salary = 85000.0;
    return job;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// Expected sentence bodies in paragraph order, written out independently of
// the serializer.
std::vector<std::string> expected_bodies(const JobPosting& job, std::optional<int> t) {
    std::vector<std::string> out = {"Job title: " + job.title, "Company: " + job.company,
                                    "Description: " + job.description,
                                    "Job type: " + job.job_type + ", state: " + job.state + ", channel: " + job.channel +
                                        ", job level: " + job.job_level};
    if (!job.skills.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < job.skills.size(); ++i) joined += (i ? ", " : "") + job.skills[i];
        out.push_back("Required skills: " + joined);
    }
    out.push_back("The job is located in " + job.city + ", " + job.state);
    if (job.salary) out.push_back("The salary is " + format_number(*job.salary));
    if (t) out.push_back("This job has been posted for " + std::to_string(*t) + " days");
    return out;
}

void expect_in_order(const std::string& paragraph, const std::vector<std::string>& bodies) {
    std::size_t last = 0;
    for (const auto& body : bodies) {
        EXPECT_EQ(count_of(paragraph, body), 1u) << body << "\n in: " << paragraph;
        const auto pos = paragraph.find(body);
        ASSERT_NE(pos, std::string::npos);
        EXPECT_GE(pos, last) << body;
        last = pos + body.size();
    }
}

TEST(TextCast, TemplateInstantiation) {
    EXPECT_EQ(text_cast(Modality::Numeric, std::optional<double>(85000.0), kTemplates), "The salary is 85000.");
    EXPECT_EQ(text_cast(Modality::Skills, std::vector<std::string>{"welding", "forklift"}, kTemplates),
              "Required skills: welding, forklift.");
    EXPECT_EQ(text_cast(Modality::Location, LocationPayload{"Tucson", "AZ"}, kTemplates),
              "The job is located in Tucson, AZ.");
    EXPECT_EQ(text_cast(Modality::Day, std::optional<int>(7), kTemplates), "This job has been posted for 7 days.");
    EXPECT_EQ(text_cast(Modality::Numeric, std::optional<double>(), kTemplates), "");
    EXPECT_EQ(text_cast(Modality::Skills, std::vector<std::string>{}, kTemplates), "");
}

TEST(TextCast, NumberFormatting) {
    EXPECT_EQ(format_number(85000.0), "85000");
    EXPECT_EQ(format_number(12.5), "12.5");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(1e21), "1000000000000000000000");
}

TEST(Serialize, EmptyJobGivesEmptyParagraph) {
    JobPosting job;
    job.job_id = "e";
    job.salary.reset();
    EXPECT_EQ(serialize_job(job, std::nullopt, kTemplates).text, "");
}

TEST(Serialize, DeterministicAndOrdered) {
    const auto job = full_job();
    const auto a = serialize_job(job, 7, kTemplates);
    EXPECT_EQ(a.text, serialize_job(job, 7, kTemplates).text);
    expect_in_order(a.text, expected_bodies(job, 7));
    EXPECT_EQ(a.text.back(), '.');
    EXPECT_EQ(count_of(a.text, ".."), 0u);
    // numeric comes before the day sentence only in joint mode
    EXPECT_EQ(serialize_job(job, std::nullopt, kTemplates).text.find("posted for"), std::string::npos);
}

TEST(Serialize, OrderHoldsOnGeneratedJobs) {
    GenConfig gen;
    gen.n_jobs = 300;
    const auto corpus = generate_corpus(gen);
    for (const auto& job : corpus.dataset.jobs) {
        expect_in_order(serialize_job(job, 14, kTemplates).text, expected_bodies(job, 14));
    }
}

TEST(Export, RoundTripKeepsKeysAndLabels) {
    GenConfig gen;
    gen.n_jobs = 60;
    auto corpus = generate_corpus(gen);
    split(corpus.dataset, SplitRatio{}, 5);
    testing::TempDir dir;
    const auto prefix = dir.file("lm");
    export_lm_dataset(corpus.dataset, kTemplates, prefix, true);
    const auto index = corpus.dataset.job_index();
    std::size_t total = 0;
    for (const char* part : {"train", "test", "val"}) {
        const auto records = read_lm_dataset(prefix + "." + part + ".jsonl");
        for (std::size_t i = 1; i < records.size(); ++i) {
            EXPECT_LT(std::tie(records[i - 1].job_id, records[i - 1].t), std::tie(records[i].job_id, records[i].t));
        }
        for (const auto& r : records) {
            const auto& job = corpus.dataset.jobs[index.at(r.job_id)];
            EXPECT_EQ(r.paragraph, serialize_job(job, r.t, kTemplates).text);
        }
        total += records.size();
    }
    EXPECT_EQ(total, corpus.dataset.size());
    std::map<std::pair<std::string, int>, int> labels;
    for (const char* part : {"train", "test", "val"}) {
        for (const auto& r : read_lm_dataset(prefix + "." + part + ".jsonl")) labels[{r.job_id, r.t}] = r.label;
    }
    for (const auto& obs : corpus.dataset.observations) EXPECT_EQ(labels.at({obs.job_id, obs.t}), obs.jac);
}

TEST(Export, EmptyDatasetGivesEmptyFiles) {
    testing::TempDir dir;
    export_lm_dataset(Dataset{}, kTemplates, dir.file("lm"), false);
    for (const char* part : {"train", "test", "val"}) {
        EXPECT_EQ(testing::read_file(dir.file(std::string("lm.") + part + ".jsonl")), "");
    }
}

TEST(Embeddings, ParseAndValidate) {
    std::istringstream ok("a\t1\t0.1\t0.2\t0.3\t0.4\nb\t7\t1\t2\t3\t4\n");
    const auto map = parse_embeddings(ok);
    EXPECT_EQ(map.vectors.size(), 2u);
    EXPECT_EQ(map.dimension, 4u);
    EXPECT_EQ(map.vectors.at({"b", 7}), (std::vector<double>{1, 2, 3, 4}));

    std::istringstream dup("a\t1\t0.1\na\t1\t0.2\n");
    try {
        parse_embeddings(dup);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("(a, 1)"), std::string::npos) << e.what();
    }
    std::istringstream ragged("a\t1\t0.1\t0.2\nb\t1\t0.1\n");
    try {
        parse_embeddings(ragged);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("ragged"), std::string::npos);
    }
}

TEST(Embeddings, JoinToObservations) {
    Dataset dataset;
    dataset.observations = {{"a", 1, 2}, {"b", 7, 5}};
    dataset.splits = {Split::Train, Split::Val};
    std::istringstream in("a\t1\t0.5\t1.5\nb\t7\t2\t3\n");
    const auto features = embeddings_to_features(parse_embeddings(in), dataset);
    ASSERT_EQ(features.rows(), 2u);
    EXPECT_EQ(features.layout.size(), 1u);
    EXPECT_EQ(features.layout[0].name, "emb");
    EXPECT_EQ(features.values(1, 0), 2.0);
    EXPECT_EQ(features.keys[1].jac, 5);
    dataset.observations.push_back({"c", 1, 0});
    dataset.splits.push_back(Split::Test);
    std::istringstream again("a\t1\t0.5\t1.5\nb\t7\t2\t3\n");
    EXPECT_THROW(embeddings_to_features(parse_embeddings(again), dataset), DataError);
}

}  // namespace
}  // namespace jacfc
