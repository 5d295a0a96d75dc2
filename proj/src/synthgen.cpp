#include "jacfc/synthgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>

#include "jacfc/random.hpp"

namespace jacfc {

namespace {

// Intensity model. The day-7 increment over the guaranteed first applicant is
// a truncated Lomax quantile of a rank-uniformized latent score, which makes
// the day-7 histogram long-tailed with an exact shape. The daily path grows
// along a shared saturating curve that equals 1 at day 7, plus a job-specific
// late-demand ramp that only starts after the history window.
constexpr double kLomaxShape = 1.5;
constexpr double kLomaxScale = 2.0;
constexpr double kEarlyTimescale = 4.0;
constexpr double kLateRampMax = 4.0;
constexpr int kLateRampStart = 14;
constexpr int kLateRampLength = 16;

struct Place {
    const char* city;
    const char* state;
    double latitude;
    double longitude;
};

constexpr std::array<Place, 14> kPlaces = {{
    {"Atlanta", "GA", 33.749, -84.388},
    {"Tucson", "AZ", 32.222, -110.975},
    {"Phoenix", "AZ", 33.448, -112.074},
    {"Chicago", "IL", 41.878, -87.630},
    {"Houston", "TX", 29.760, -95.370},
    {"Dallas", "TX", 32.777, -96.797},
    {"Seattle", "WA", 47.606, -122.332},
    {"Denver", "CO", 39.739, -104.990},
    {"Boston", "MA", 42.360, -71.059},
    {"Miami", "FL", 25.762, -80.192},
    {"Orlando", "FL", 28.538, -81.379},
    {"Columbus", "OH", 39.961, -82.999},
    {"Portland", "OR", 45.515, -122.679},
    {"Raleigh", "NC", 35.780, -78.639},
}};

constexpr std::array<const char*, 5> kJobTypes = {"full_time", "part_time", "contract", "temporary", "internship"};
constexpr std::array<const char*, 5> kChannels = {"organic", "sponsored", "partner", "email", "social"};
constexpr std::array<const char*, 5> kLevels = {"entry", "associate", "mid", "senior", "executive"};
constexpr std::array<double, 5> kLevelSalary = {32000, 45000, 62000, 88000, 140000};

constexpr std::array<const char*, 48> kTitleWords = {
    "nurse",      "registered", "warehouse",  "associate", "software",   "engineer",  "driver",     "truck",
    "sales",      "manager",    "assistant",  "clerk",     "accountant", "analyst",   "technician", "welder",
    "forklift",   "operator",   "cashier",    "customer",  "service",    "teacher",   "medical",    "dental",
    "hygienist",  "mechanic",   "electrician", "plumber",  "designer",   "marketing", "specialist", "coordinator",
    "supervisor", "developer",  "data",       "scientist", "pharmacy",   "retail",    "logistics",  "maintenance",
    "security",   "guard",      "cook",       "chef",      "barista",    "therapist", "recruiter",  "administrator"};

constexpr std::array<const char*, 40> kSkillWords = {
    "welding",    "forklift",  "python",     "sql",        "excel",     "cpr",        "scheduling", "inventory",
    "negotiation", "java",     "cooking",    "driving",    "bookkeeping", "payroll",  "customer_service", "sales",
    "marketing",  "seo",       "phlebotomy", "triage",     "carpentry", "plumbing",   "wiring",     "hvac",
    "cloud",      "linux",     "networking", "auditing",   "tax",       "spanish",    "leadership", "coaching",
    "cad",        "machining", "packaging",  "shipping",   "cleaning",  "security",   "pharmacology", "teaching"};

constexpr std::array<const char*, 24> kDescriptionWords = {
    "flexible", "schedule", "benefits", "team",     "growth",    "training", "fast", "paced",
    "dynamic",  "shift",    "weekend",  "overtime", "insurance", "bonus",    "remote", "onsite",
    "career",   "safety",   "quality",  "customer", "reliable",  "detail",   "communication", "support"};

constexpr std::array<const char*, 12> kSyllables = {"ac", "mer", "tor", "vel", "din", "sol",
                                                     "bra", "quin", "ost", "lum", "ner", "zen"};
constexpr std::array<const char*, 5> kCompanySuffixes = {"Corp", "Group", "Health", "Logistics", "Labs"};

std::string indexed_word(const char* base, std::size_t index, std::size_t base_count) {
    if (index < base_count) return base;
    return std::string(base) + "_" + std::to_string(index / base_count);
}

std::vector<std::string> make_vocab(const auto& words, std::size_t size) {
    std::vector<std::string> vocab;
    vocab.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        vocab.push_back(indexed_word(words[i % words.size()], i, words.size()));
    }
    return vocab;
}

std::vector<std::string> make_companies(std::size_t size, Rng& rng) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    while (names.size() < size) {
        std::string name;
        const std::size_t parts = 2 + rng.below(2);
        for (std::size_t p = 0; p < parts; ++p) name += kSyllables[rng.below(kSyllables.size())];
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        name += std::string(" ") + kCompanySuffixes[rng.below(kCompanySuffixes.size())];
        if (seen.insert(name).second) {
            names.push_back(name);
        } else {
            names.push_back(name + " " + std::to_string(names.size()));
            seen.insert(names.back());
        }
    }
    return names;
}

std::vector<double> normal_effects(std::size_t n, Rng& rng) {
    std::vector<double> effects(n);
    for (auto& e : effects) e = rng.normal();
    return effects;
}

/// Zipf-like index draw on [0, n): low indices are more common.
std::size_t zipf_index(std::size_t n, Rng& rng) {
    const double u = rng.uniform();
    return std::min(n - 1, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n) + 1.0, u) - 1.0)));
}

/// Latent effects that tie features to counts; drawn once per corpus.
struct Effects {
    std::vector<double> job_type, channel, level, place, company, title, skill;
    std::vector<double> late_job_type, late_channel, late_level, late_skill;
    std::vector<double> interaction;       // channel x level, intensity
    std::vector<double> late_interaction;  // channel x level, late ramp
};

void standardize(std::vector<double>& values) {
    if (values.empty()) return;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    for (double& v : values) v = sd > 0.0 ? (v - mean) / sd : 0.0;
}

/// (rank + 0.5) / n with ties broken by index.
std::vector<double> rank_uniform(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> u(values.size());
    const double n = static_cast<double>(values.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        u[order[r]] = (static_cast<double>(r) + 0.5) / n;
    }
    return u;
}

double truncated_lomax_quantile(double u, double upper) {
    if (upper <= 0.0) return 0.0;
    const double mass = 1.0 - std::pow(1.0 + upper / kLomaxScale, -kLomaxShape);
    const double q = kLomaxScale * (std::pow(1.0 - u * mass, -1.0 / kLomaxShape) - 1.0);
    return std::min(q, upper);
}

double early_curve(int t) {
    return (1.0 - std::exp(-t / kEarlyTimescale)) / (1.0 - std::exp(-7.0 / kEarlyTimescale));
}

double growth(int t, double late_ramp) {
    const double late = std::clamp(static_cast<double>(t - kLateRampStart) / kLateRampLength, 0.0, 1.0);
    return early_curve(t) + late_ramp * late;
}

}  // namespace

void GenConfig::validate() const {
    if (n_jobs == 0) throw std::invalid_argument("n_jobs must be positive");
    if (horizons.empty()) throw std::invalid_argument("horizons must be non-empty");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 1) throw std::invalid_argument("horizons must be >= 1");
        if (i > 0 && horizons[i] <= horizons[i - 1]) throw std::invalid_argument("horizons must be strictly increasing");
    }
    if (!(split_ratio.train > 0 && split_ratio.test > 0 && split_ratio.val > 0)) {
        throw std::invalid_argument("split ratio components must be positive");
    }
    if (max_jac < 1) throw std::invalid_argument("max_jac must be >= 1");
    if (title_vocab == 0 || company_vocab == 0 || skill_vocab == 0) {
        throw std::invalid_argument("vocabulary sizes must be positive");
    }
    if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) {
        throw std::invalid_argument("signal_strength must be in [0, 1]");
    }
    if (history_days < 0) throw std::invalid_argument("history_days must be >= 0");
}

int GenConfig::effective_history_days() const {
    if (history_days > 0) return history_days;
    return horizons.size() >= 2 ? horizons[horizons.size() - 2] : horizons.front();
}

double horizon_availability(int t) {
    // relative per-day sizes of the reference corpus, day 7 = 1
    static constexpr std::array<std::pair<double, double>, 5> anchors = {{
        {1.0, 109163.0 / 305440.0},
        {3.0, 267678.0 / 305440.0},
        {7.0, 1.0},
        {14.0, 239117.0 / 305440.0},
        {30.0, 67033.0 / 305440.0},
    }};
    const double x = std::log(static_cast<double>(t));
    if (t <= anchors.front().first) return anchors.front().second;
    if (t >= anchors.back().first) return anchors.back().second;
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        if (t <= anchors[i].first) {
            const double x0 = std::log(anchors[i - 1].first);
            const double x1 = std::log(anchors[i].first);
            const double w = (x - x0) / (x1 - x0);
            return anchors[i - 1].second + w * (anchors[i].second - anchors[i - 1].second);
        }
    }
    return anchors.back().second;
}

GeneratedCorpus generate_corpus(const GenConfig& config) {
    config.validate();
    Rng vocab_rng(derive_seed(config.seed, 0));
    const auto title_vocab = make_vocab(kTitleWords, config.title_vocab);
    const auto skill_vocab = make_vocab(kSkillWords, config.skill_vocab);
    const auto companies = make_companies(config.company_vocab, vocab_rng);

    Rng effect_rng(derive_seed(config.seed, 1));
    Effects fx;
    fx.job_type = normal_effects(kJobTypes.size(), effect_rng);
    fx.channel = normal_effects(kChannels.size(), effect_rng);
    fx.level = normal_effects(kLevels.size(), effect_rng);
    fx.place = normal_effects(kPlaces.size(), effect_rng);
    fx.company = normal_effects(companies.size(), effect_rng);
    fx.title = normal_effects(title_vocab.size(), effect_rng);
    fx.skill = normal_effects(skill_vocab.size(), effect_rng);
    fx.interaction = normal_effects(kChannels.size() * kLevels.size(), effect_rng);
    fx.late_job_type = normal_effects(kJobTypes.size(), effect_rng);
    fx.late_channel = normal_effects(kChannels.size(), effect_rng);
    fx.late_level = normal_effects(kLevels.size(), effect_rng);
    fx.late_skill = normal_effects(skill_vocab.size(), effect_rng);
    fx.late_interaction = normal_effects(kChannels.size() * kLevels.size(), effect_rng);

    const std::size_t n = config.n_jobs;
    const std::size_t id_width = std::max<std::size_t>(6, std::to_string(n).size());

    GeneratedCorpus corpus;
    auto& jobs = corpus.dataset.jobs;
    jobs.resize(n);
    std::vector<double> feature_score(n), late_score(n), noise(n), late_noise(n);
    std::vector<std::vector<int>> observed_days(n);

    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(derive_seed(config.seed, 1000 + i));
        JobPosting& job = jobs[i];
        std::string id = std::to_string(i + 1);
        job.job_id = "job-" + std::string(id_width - id.size(), '0') + id;

        const std::size_t type = rng.below(kJobTypes.size());
        const std::size_t channel = rng.below(kChannels.size());
        const std::size_t level = rng.below(kLevels.size());
        const std::size_t place = rng.below(kPlaces.size());
        const std::size_t company = zipf_index(companies.size(), rng);
        job.job_type = kJobTypes[type];
        job.channel = kChannels[channel];
        job.job_level = kLevels[level];
        job.state = kPlaces[place].state;
        job.city = kPlaces[place].city;
        job.company = companies[company];
        job.latitude = std::clamp(kPlaces[place].latitude + rng.uniform(-0.3, 0.3), -90.0, 90.0);
        job.longitude = normalize_longitude(kPlaces[place].longitude + rng.uniform(-0.3, 0.3));

        std::vector<std::size_t> title_words;
        const std::size_t title_len = 2 + rng.below(2);
        while (title_words.size() < title_len) {
            const std::size_t w = zipf_index(title_vocab.size(), rng);
            if (std::find(title_words.begin(), title_words.end(), w) == title_words.end()) title_words.push_back(w);
        }
        for (std::size_t k = 0; k < title_words.size(); ++k) {
            if (k > 0) job.title += ' ';
            job.title += title_vocab[title_words[k]];
        }

        std::vector<std::size_t> skill_ids;
        const std::size_t n_skills = rng.below(6);
        while (skill_ids.size() < n_skills) {
            const std::size_t s = zipf_index(skill_vocab.size(), rng);
            if (std::find(skill_ids.begin(), skill_ids.end(), s) == skill_ids.end()) skill_ids.push_back(s);
        }
        for (std::size_t s : skill_ids) job.skills.push_back(skill_vocab[s]);

        job.description = "We are hiring a " + job.title + " at " + job.company + ".";
        const std::size_t desc_len = 3 + rng.below(4);
        job.description += " Looking for";
        for (std::size_t k = 0; k < desc_len; ++k) {
            job.description += std::string(" ") + kDescriptionWords[rng.below(kDescriptionWords.size())];
        }
        job.description += ".";

        double log_salary_z = 0.0;
        if (rng.bernoulli(0.8)) {
            const double salary = kLevelSalary[level] * std::exp(0.25 * rng.normal());
            job.salary = std::round(salary / 500.0) * 500.0;
            log_salary_z = (std::log(*job.salary) - std::log(kLevelSalary[level])) / 0.25;
        }

        double title_effect = 0.0;
        for (std::size_t w : title_words) title_effect += fx.title[w];
        title_effect /= static_cast<double>(title_words.size());
        double skill_effect = 0.0;
        double late_skill_effect = 0.0;
        for (std::size_t s : skill_ids) {
            skill_effect += fx.skill[s];
            late_skill_effect += fx.late_skill[s];
        }
        if (!skill_ids.empty()) {
            skill_effect /= static_cast<double>(skill_ids.size());
            late_skill_effect /= static_cast<double>(skill_ids.size());
        }

        const std::size_t cell = channel * kLevels.size() + level;
        feature_score[i] = fx.job_type[type] + fx.channel[channel] + fx.level[level] + 0.7 * fx.interaction[cell] +
                           0.6 * fx.place[place] + 0.5 * fx.company[company] + 0.8 * title_effect +
                           0.8 * skill_effect + 0.4 * log_salary_z;
        late_score[i] = fx.late_job_type[type] + fx.late_channel[channel] + fx.late_level[level] +
                        0.7 * fx.late_interaction[cell] + 0.6 * late_skill_effect;
        noise[i] = rng.normal();
        late_noise[i] = rng.normal();

        for (int t : config.horizons) {
            if (rng.bernoulli(horizon_availability(t))) observed_days[i].push_back(t);
        }
        if (observed_days[i].empty()) {
            const auto best = std::max_element(config.horizons.begin(), config.horizons.end(), [](int a, int b) {
                return horizon_availability(a) < horizon_availability(b);
            });
            observed_days[i].push_back(*best);
        }
    }

    standardize(feature_score);
    standardize(late_score);
    const double s = config.signal_strength;
    std::vector<double> intensity_latent(n), late_latent(n);
    for (std::size_t i = 0; i < n; ++i) {
        intensity_latent[i] = std::sqrt(s) * feature_score[i] + std::sqrt(1.0 - s) * noise[i];
        late_latent[i] = std::sqrt(s) * late_score[i] + std::sqrt(1.0 - s) * late_noise[i];
    }
    const auto intensity_u = rank_uniform(intensity_latent);
    const auto late_u = rank_uniform(late_latent);

    const int last_day = std::max(config.horizons.back(), config.effective_history_days());
    const double peak_growth = growth(last_day, kLateRampMax);
    const double increment_cap = std::max(0.0, (config.max_jac - 1) / peak_growth);
    const int history_days = config.effective_history_days();

    auto& observations = corpus.dataset.observations;
    for (std::size_t i = 0; i < n; ++i) {
        const double day7_increment = truncated_lomax_quantile(intensity_u[i], increment_cap);
        const double late_ramp = kLateRampMax * late_u[i];
        auto count_at = [&](int t) {
            const int count = 1 + static_cast<int>(std::floor(day7_increment * growth(t, late_ramp)));
            return std::min(count, config.max_jac);
        };
        for (int t : observed_days[i]) {
            observations.push_back({jobs[i].job_id, t, count_at(t)});
        }
        for (int t = 1; t <= history_days; ++t) {
            corpus.daily_history.push_back({jobs[i].job_id, t, count_at(t)});
        }
    }
    return corpus;
}

std::vector<std::pair<std::string, Split>> split(Dataset& dataset, const SplitRatio& ratio, std::uint64_t seed) {
    if (!(ratio.train > 0 && ratio.test > 0 && ratio.val > 0)) {
        throw std::invalid_argument("split ratio components must be positive");
    }
    const std::size_t n = dataset.jobs.size();
    if (n < 3) {
        throw std::invalid_argument("need at least 3 jobs to populate train/test/val, got " + std::to_string(n));
    }
    const double total = ratio.train + ratio.test + ratio.val;
    auto share = [&](double part) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * part / total)));
    };
    std::size_t n_test = share(ratio.test);
    std::size_t n_val = share(ratio.val);
    while (n_test + n_val > n - 1) {
        if (n_test >= n_val && n_test > 1) {
            --n_test;
        } else {
            --n_val;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x5911));
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(order[i], order[rng.below(i + 1)]);
    }
    std::vector<Split> by_index(n, Split::Train);
    for (std::size_t k = 0; k < n_test; ++k) by_index[order[k]] = Split::Test;
    for (std::size_t k = n_test; k < n_test + n_val; ++k) by_index[order[k]] = Split::Val;

    std::vector<std::pair<std::string, Split>> rows;
    std::map<std::string, Split, std::less<>> by_job;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows.emplace_back(dataset.jobs[i].job_id, by_index[i]);
        by_job.emplace(dataset.jobs[i].job_id, by_index[i]);
    }
    apply_job_splits(dataset, by_job);
    return rows;
}

void write_corpus(const std::string& dir, const GeneratedCorpus& corpus,
                  const std::vector<std::pair<std::string, Split>>& splits) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path base(dir);
    write_jobs((base / "jobs.jsonl").string(), corpus.dataset.jobs);
    write_observations((base / "observations.jsonl").string(), corpus.dataset.observations);
    write_splits((base / "splits.csv").string(), splits);
    write_observations((base / "daily.jsonl").string(), corpus.daily_history);
}

}  // namespace jacfc
