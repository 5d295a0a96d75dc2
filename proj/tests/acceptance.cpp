// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "forecast_oracles.hpp"
#include "jacfc/commands.hpp"
#include "jacfc/evalreport.hpp"
#include "jacfc/featfusion.hpp"
#include "jacfc/feature_io.hpp"
#include "jacfc/lmserialize.hpp"
#include "jacfc/mlp.hpp"
#include "jacfc/random.hpp"
#include "jacfc/synthgen.hpp"
#include "jacfc/trainer.hpp"
#include "jacfc/tsforecast.hpp"
#include "test_support.hpp"

using namespace jacfc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), pattern, a, b, c);
    return buffer;
}

// ---- 1 ----------------------------------------------------------------------

Outcome location_transform() {
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto v = embed_location(rng.uniform(-90, 90), rng.uniform(-179.9999, 180));
        worst = std::max(worst, std::abs(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - 1.0));
    }
    const bool exact = embed_location(0, 0) == std::array<double, 3>{1, 0, 0} &&
                       embed_location(90, 123) == std::array<double, 3>{0, 0, 1} &&
                       embed_location(-90, -45) == std::array<double, 3>{0, 0, -1} &&
                       embed_location(0, 90)[1] == 1.0 && embed_location(0, 180)[0] == -1.0;
    return {worst <= 1e-12 && exact, fmt("max |norm-1| = %.2e, special points exact = %g", worst, exact)};
}

// ---- 2 ----------------------------------------------------------------------

Outcome fusion_layout() {
    GenConfig gen;
    gen.n_jobs = 1000;
    auto corpus = generate_corpus(gen);
    FusionConfig base;
    std::size_t checked = 0, bad = 0;
    for (bool with_day : {false, true}) {
        base.include_day = with_day;
        base.days = gen.horizons;
        const auto config = fit_fusion_config(corpus.dataset.jobs, base);
        std::size_t categorical = 0;
        for (const auto& s : config.schemas) categorical += s.size();
        const std::size_t expected = config.d_company + config.d_title + config.d_desc + categorical +
                                     config.skill_dim + 3 + 2 + (with_day ? config.days.size() : 0);
        const auto index = corpus.dataset.job_index();
        for (const auto& obs : corpus.dataset.observations) {
            const auto fused = fuse(corpus.dataset.jobs[index.at(obs.job_id)], obs.t, SkillEmbeddingTable{}, config);
            std::size_t offset = 0;
            bool tiles = true;
            for (const auto& span : fused.layout) {
                tiles = tiles && span.offset == offset && span.length > 0;
                offset += span.length;
            }
            if (fused.values.size() != expected || offset != expected || !tiles) ++bad;
            ++checked;
        }
    }
    return {bad == 0, fmt("%.0f vectors checked, %.0f mismatches", static_cast<double>(checked),
                          static_cast<double>(bad))};
}

// ---- 3 ----------------------------------------------------------------------

Outcome gradient_check() {
    Rng rng(303);
    const double h = 1e-5;
    double worst = 0.0;
    std::size_t compared = 0, kinks = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t in = 2 + rng.below(5);
        std::vector<std::size_t> hidden;
        for (std::size_t k = 0, depth = 1 + rng.below(3); k < depth; ++k) hidden.push_back(2 + rng.below(6));
        auto model = MlpModel::initialized(in, hidden, 1000 + static_cast<std::uint64_t>(trial));
        for (auto& l : model.layers()) {
            for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = rng.uniform(-0.3, 0.3);
        }
        const Eigen::Index batch = 1 + static_cast<Eigen::Index>(rng.below(6));
        Eigen::MatrixXd x(static_cast<Eigen::Index>(in), batch);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
        std::vector<double> y(static_cast<std::size_t>(batch));
        for (auto& v : y) v = rng.uniform(-2, 2);
        const auto grads = backward(model, forward_cached(model, x), y);
        const auto loss = [&] {
            const Eigen::RowVectorXd p = model.forward_batch(x);
            return l1_loss(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())), y);
        };
        for (std::size_t k = 0; k < model.layers().size(); ++k) {
            auto& l = model.layers()[k];
            for (int part = 0; part < 2; ++part) {
                double* param = part == 0 ? l.weights.data() : l.bias.data();
                const double* analytic = part == 0 ? grads[k].weights.data() : grads[k].bias.data();
                const Eigen::Index size = part == 0 ? l.weights.size() : l.bias.size();
                for (Eigen::Index i = 0; i < size; ++i) {
                    const double saved = param[i];
                    const double f0 = loss();
                    param[i] = saved + h;
                    const double fp = loss();
                    param[i] = saved - h;
                    const double fm = loss();
                    param[i] = saved;
                    // one-sided slopes disagree only across a ReLU or |.| kink
                    if (std::abs((fp - f0) - (f0 - fm)) > 1e-9) {
                        ++kinks;
                        continue;
                    }
                    const double numeric = (fp - fm) / (2 * h);
                    const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
                    worst = std::max(worst, std::abs(numeric - analytic[i]) / denom);
                    ++compared;
                }
            }
        }
    }
    return {worst < 1e-4 && compared > 0,
            fmt("max relative error %.2e over %.0f parameters (%.0f kink coordinates skipped)", worst,
                static_cast<double>(compared), static_cast<double>(kinks))};
}

// ---- 4 ----------------------------------------------------------------------

Outcome adam_first_step() {
    Rng rng(404);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const double w0 = rng.uniform(-2, 2);
        const double g = rng.uniform(-5, 5) * std::pow(10.0, -static_cast<double>(rng.below(6)));
        AdamConfig config;
        config.learning_rate = std::pow(10.0, rng.uniform(-4, -1));
        MlpModel model({DenseLayer{Eigen::MatrixXd::Constant(1, 1, w0), Eigen::VectorXd::Zero(1)}});
        auto state = OptimizerState::zeros_like(model);
        adam_step(model, state, {DenseLayer{Eigen::MatrixXd::Constant(1, 1, g), Eigen::VectorXd::Zero(1)}}, config);
        const double expected = -config.learning_rate * g / (std::sqrt(g * g) + config.epsilon);
        worst = std::max(worst, std::abs((model.layers()[0].weights(0, 0) - w0) - expected));
    }
    return {worst <= 1e-6, fmt("max |dw - closed form| = %.2e", worst)};
}

// ---- 5 ----------------------------------------------------------------------

Outcome early_stopping() {
    struct Trace {
        std::vector<double> values;
        std::size_t stop, best;
    };
    const std::vector<Trace> traces = {
        {{5, 4, 4, 4, 4, 4, 4}, 7, 2},
        {{9, 8, 7, 6, 5, 4, 3, 2, 1, 0.5}, 10, 10},
        {{1, 2, 3, 4, 5, 6, 0}, 6, 1},
        {{3, 2, 2.5, 2.1, 2.2, 1.9, 2, 2, 2, 2, 2, 1}, 11, 6},
        {{2, 2, 2, 2, 2, 2}, 6, 1},
    };
    bool ok = true;
    for (const auto& trace : traces) {
        EarlyStopping stopper(5);
        for (double v : trace.values) {
            stopper.observe(v);
            if (stopper.should_stop()) break;
        }
        ok = ok && stopper.epochs_seen() == trace.stop && stopper.best_epoch() == trace.best;
    }
    // restoration inside the training loop
    Rng rng(505);
    FeatureMatrix f;
    f.layout = {{"x", 0, 4}};
    f.values.resize(300, 4);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = rng.uniform(-1, 1);
    for (Eigen::Index r = 0; r < 300; ++r) {
        const Split s = r % 4 == 0 ? Split::Val : Split::Train;
        f.keys.push_back({"j" + std::to_string(r), 7, s, static_cast<int>(rng.below(6))});
    }
    TrainConfig config;
    config.hidden_dims = {16, 8};
    config.batch_size = 16;
    config.adam.learning_rate = 1e-2;
    const auto data = training_data(f);
    const auto result = train(data, config);
    const double restored = evaluate_mae(result.model, f.values, data.labels, data.val_rows);
    const bool restore_ok = result.best_epoch >= 1 &&
                            restored == result.history[result.best_epoch - 1].val_mae &&
                            (result.history.size() == config.max_epochs ||
                             result.history.size() == result.best_epoch + config.patience);
    return {ok && restore_ok, fmt("scripted traces ok = %g, restored best epoch %.0f of %.0f", ok,
                                  static_cast<double>(result.best_epoch), static_cast<double>(result.history.size()))};
}

// ---- 6 ----------------------------------------------------------------------

Outcome forecaster_oracles() {
    using namespace oracle;
    Rng rng(606);
    double worst = 0.0;
    bool identities = true;
    for (int c = 0; c < 200; ++c) {
        Series y(1 + rng.below(12));
        const bool intermittent = rng.bernoulli(0.6);
        for (auto& v : y) v = intermittent ? (rng.bernoulli(0.45) ? static_cast<double>(1 + rng.below(9)) : 0.0)
                                           : rng.uniform(0, 10);
        const double a = rng.uniform(0.05, 1.0);
        const double ap = rng.uniform(0.05, 1.0);
        const std::size_t b = 1 + rng.below(y.size());
        const std::size_t w = 1 + rng.below(y.size());
        const auto diff = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
        diff(ses(y, a, 1).at(1), oracle_ses(y, a));
        diff(croston(y, a, CrostonVariant::Classic, 1).at(1), oracle_croston(y, a));
        diff(croston(y, a, CrostonVariant::Sba, 1).at(1), oracle_croston(y, a) * (1 - a / 2));
        diff(tsb(y, a, ap, 1).at(1), oracle_tsb(y, a, ap));
        diff(adida(y, b, a, 1).at(1), oracle_adida(y, b, a));
        diff(imapa(y, a, 1).at(1), oracle_imapa(y, a));
        diff(window_average(y, w, 1).at(1), oracle_window(y, w));
        // AR on the same case when there are enough rows for a determined fit
        const std::vector<int> lags = {1 + static_cast<int>(rng.below(2))};
        if (y.size() >= static_cast<std::size_t>(lags[0]) + 3 && !intermittent) {
            diff(autoregressive(y, lags, 1).at(1), oracle_ar_path(y, lags, 1)[0]);
        }
        const double classic = croston(y, a, CrostonVariant::Classic, 1).at(1);
        identities = identities && std::abs(croston(y, a, CrostonVariant::Sba, 1).at(1) - (1 - a / 2) * classic) <= 1e-12;
        identities = identities && adida(y, 1, a, 3).values == ses(y, a, 3).values;
    }
    return {worst <= 1e-9 && identities, fmt("max deviation %.2e, identities hold = %g", worst, identities)};
}

// ---- 7 ----------------------------------------------------------------------

Outcome ar_plant_and_recover() {
    Rng rng(707);
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const double intercept = rng.uniform(-3, 3);
        const double phi = rng.uniform(-0.9, 0.9);
        std::vector<double> y = {rng.uniform(0, 5), rng.uniform(0, 5)};
        while (y.size() < 20) y.push_back(intercept + phi * y[y.size() - 2]);
        const std::vector<int> lags = {2};
        const auto fit = fit_autoregressive(y, lags);
        worst = std::max({worst, std::abs(fit.intercept - intercept), std::abs(fit.coefficients[0] - phi)});
    }
    return {worst <= 1e-8, fmt("max parameter error %.2e", worst)};
}

// ---- 8 ----------------------------------------------------------------------

Outcome metrics() {
    Rng rng(808);
    bool male_ok = true;
    double worst_weighted = 0.0;
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = 1 + rng.below(30);
        std::vector<double> p(n), y(n), ints(n);
        std::vector<LabeledPrediction> labeled;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.uniform(-3, 40);
            y[i] = static_cast<double>(rng.below(40));
            ints[i] = std::floor(std::max(0.0, p[i]) + 0.5);
            labeled.push_back({"j", static_cast<int>(1 + rng.below(5)), static_cast<int>(y[i]), p[i]});
        }
        male_ok = male_ok && male(p, y) == mae(ints, y);
        const auto report = evaluate_grouped(labeled, c % 2 ? GroupBy::Day : GroupBy::Jac);
        std::map<std::string, std::pair<double, std::size_t>> sums;
        double overall = 0.0;
        for (const auto& row : report.rows) {
            if (row.metric != "MAE") continue;
            if (row.group == "overall") {
                overall = row.value;
            } else {
                sums["g"].first += row.value * static_cast<double>(row.n);
                sums["g"].second += row.n;
            }
        }
        worst_weighted = std::max(worst_weighted, std::abs(sums["g"].first / static_cast<double>(sums["g"].second) - overall));
    }
    return {male_ok && worst_weighted <= 1e-12,
            fmt("MALE == MAE(integer preds) on all cases = %g, max |weighted group mean - overall| = %.2e", male_ok,
                worst_weighted)};
}

// ---- 9 ----------------------------------------------------------------------

Outcome serializer() {
    GenConfig gen;
    gen.n_jobs = 1000;
    auto corpus = generate_corpus(gen);
    split(corpus.dataset, gen.split_ratio, gen.seed);
    const TemplateConfig templates;
    std::size_t misordered = 0;
    for (const auto& job : corpus.dataset.jobs) {
        const std::string text = serialize_job(job, 7, templates).text;
        // expected modality anchors in equation order: text, categorical, skills, location, numeric, day
        std::vector<std::string> anchors = {"Job title: ", "Company: ", "Description: ", "Job type: "};
        if (!job.skills.empty()) anchors.push_back("Required skills: ");
        anchors.push_back("The job is located in ");
        if (job.salary) anchors.push_back("The salary is ");
        anchors.push_back("This job has been posted for 7 days");
        std::size_t last = 0;
        for (const auto& a : anchors) {
            const auto pos = text.find(a);
            if (pos == std::string::npos || pos < last || text.find(a, pos + 1) != std::string::npos) {
                ++misordered;
                break;
            }
            last = pos;
        }
    }
    testing::TempDir dir;
    export_lm_dataset(corpus.dataset, templates, dir.file("lm"), true);
    std::map<std::pair<std::string, int>, LmRecord> back;
    for (const char* part : {"train", "test", "val"}) {
        for (auto& r : read_lm_dataset(dir.file(std::string("lm.") + part + ".jsonl"))) back[{r.job_id, r.t}] = r;
    }
    std::size_t lossy = back.size() == corpus.dataset.size() ? 0 : 1;
    const auto index = corpus.dataset.job_index();
    for (const auto& obs : corpus.dataset.observations) {
        auto it = back.find({obs.job_id, obs.t});
        if (it == back.end() || it->second.label != obs.jac ||
            it->second.paragraph != serialize_job(corpus.dataset.jobs[index.at(obs.job_id)], obs.t, templates).text) {
            ++lossy;
        }
    }
    return {misordered == 0 && lossy == 0,
            fmt("%.0f misordered paragraphs, %.0f lossy records", static_cast<double>(misordered),
                static_cast<double>(lossy))};
}

// ---- 10 ---------------------------------------------------------------------

Outcome synthetic_shape() {
    GenConfig gen;
    gen.n_jobs = 100000;
    auto corpus = generate_corpus(gen);
    const auto rows = split(corpus.dataset, gen.split_ratio, gen.seed);
    std::map<int, std::size_t> hist;
    int max_jac = 0;
    for (const auto& obs : corpus.dataset.observations) {
        max_jac = std::max(max_jac, obs.jac);
        if (obs.t == 7) ++hist[obs.jac];
    }
    int mode = 0;
    std::size_t mode_count = 0;
    for (const auto& [jac, count] : hist) {
        if (count > mode_count) {
            mode = jac;
            mode_count = count;
        }
    }
    bool tail = true;
    for (int j = 3; j < hist.rbegin()->first; ++j) tail = tail && hist[j] >= hist[j + 1];
    double share[3] = {0, 0, 0};
    for (const auto& [_, s] : rows) share[static_cast<int>(s)] += 1.0 / static_cast<double>(rows.size());
    const double dev = std::max({std::abs(share[0] - 8.0 / 12), std::abs(share[1] - 2.0 / 12),
                                 std::abs(share[2] - 2.0 / 12)});
    const bool ok = (mode == 1 || mode == 2) && tail && max_jac <= 75 && dev <= 0.01;
    return {ok, fmt("mode %.0f, tail non-increasing = %g, max jac %.0f", mode, tail, max_jac) +
                    fmt(", split deviation %.4f", dev)};
}

// ---- 11 / 12 ----------------------------------------------------------------

struct PipelineResult {
    bool ok = false;
    std::string error;
    double mlp_mae = 0.0;
    double mean_mae = 0.0;
    std::map<std::string, double> ts_mae;
    std::size_t n_test = 0;
};

const std::vector<std::pair<std::string, std::vector<std::string>>> kBaselines = {
    {"ses", {"ses", "--alpha", "0.5"}},
    {"croston", {"croston"}},
    {"window-average", {"window-average", "--window", "3"}},
    {"ar", {"ar", "--lags", "2"}},
};

std::vector<std::string> pipeline_outputs() {
    std::vector<std::string> files = {"model.json", "history.csv", "report.csv", "mlp_test30.csv"};
    for (const auto& [name, _] : kBaselines) {
        files.push_back("ts_" + name + ".csv");
        files.push_back("report_" + name + ".csv");
    }
    return files;
}

bool cli(std::vector<std::string> args, std::string& error) {
    args.insert(args.begin(), "jacfc");
    std::ostringstream out, err;
    if (cli::run(args, out, err) != 0) {
        error = args[1] + ": " + err.str();
        return false;
    }
    return true;
}

double mae_at(const std::string& predictions, const std::map<std::string, int>& labels, std::size_t& matched) {
    double total = 0.0;
    matched = 0;
    for (const auto& p : read_predictions(predictions)) {
        auto it = labels.find(p.job_id);
        if (p.t != 30 || it == labels.end()) continue;
        total += std::abs(std::max(0.0, p.prediction) - it->second);
        ++matched;
    }
    return matched ? total / static_cast<double>(matched) : INFINITY;
}

PipelineResult run_pipeline(const fs::path& root) {
    PipelineResult result;
    fs::remove_all(root);
    fs::create_directories(root);
    const auto at = [&](const std::string& name) { return (root / name).string(); };
    const std::string data = at("data");
    std::string& error = result.error;
    if (!cli({"generate", "--n-jobs", "20000", "--signal-strength", "0.9", "--seed", "42", "--out", data}, error) ||
        !cli({"featurize", "--data", data, "--include-day", "--out", at("features.bin")}, error) ||
        !cli({"train", "--features", at("features.bin"), "--mode", "joint", "--seed", "42", "--out", at("model.json"),
              "--history", at("history.csv")},
             error) ||
        !cli({"predict", "--model", at("model.json"), "--features", at("features.bin"), "--split", "test", "--day", "30",
              "--out", at("mlp_test30.csv")},
             error) ||
        !cli({"evaluate", "--pred", at("mlp_test30.csv"), "--obs", data + "/observations.jsonl", "--group-by", "day",
              "--out", at("report.csv")},
             error)) {
        return result;
    }
    for (const auto& [name, method] : kBaselines) {
        std::vector<std::string> args = {"forecast-ts", "--history", data + "/daily.jsonl", "--jobs",
                                         data + "/jobs.jsonl", "--splits", data + "/splits.csv", "--split", "test",
                                         "--target-day", "30", "--out", at("ts_" + name + ".csv")};
        args.insert(args.end(), method.begin(), method.end());
        if (!cli(args, error) ||
            !cli({"evaluate", "--pred", at("ts_" + name + ".csv"), "--obs", data + "/observations.jsonl", "--group-by",
                  "day", "--drop-unlabeled", "--out", at("report_" + name + ".csv")},
                 error)) {
            return result;
        }
    }

    // labels at t = 30, computed here rather than taken from the reports
    const auto splits = load_splits(data + "/splits.csv");
    std::map<std::string, int> test_labels;
    double train_sum = 0.0;
    std::size_t train_n = 0;
    for (const auto& obs : load_observations(data + "/observations.jsonl")) {
        if (obs.t != 30) continue;
        const Split s = splits.at(obs.job_id);
        if (s == Split::Test) test_labels[obs.job_id] = obs.jac;
        if (s == Split::Train) {
            train_sum += obs.jac;
            ++train_n;
        }
    }
    result.n_test = test_labels.size();
    const double train_mean = train_sum / static_cast<double>(train_n);
    for (const auto& [_, y] : test_labels) result.mean_mae += std::abs(train_mean - y);
    result.mean_mae /= static_cast<double>(test_labels.size());
    std::size_t matched = 0;
    result.mlp_mae = mae_at(at("mlp_test30.csv"), test_labels, matched);
    if (matched != test_labels.size()) {
        error = "MLP predictions missing for some test jobs";
        return result;
    }
    for (const auto& [name, _] : kBaselines) {
        result.ts_mae[name] = mae_at(at("ts_" + name + ".csv"), test_labels, matched);
        if (matched != test_labels.size()) {
            error = name + " predictions missing for some test jobs";
            return result;
        }
    }
    result.ok = true;
    return result;
}

const fs::path kRunA = fs::temp_directory_path() / "jacfc-acceptance-a";
const fs::path kRunB = fs::temp_directory_path() / "jacfc-acceptance-b";
std::optional<PipelineResult> first_run;

Outcome relative_ordering() {
    first_run = run_pipeline(kRunA);
    const auto& r = *first_run;
    if (!r.ok) return {false, "pipeline failed: " + r.error};
    std::string best_name;
    double best = INFINITY;
    for (const auto& [name, value] : r.ts_mae) {
        if (value < best) {
            best = value;
            best_name = name;
        }
    }
    const bool ok = r.mlp_mae <= 0.85 * r.mean_mae && r.mlp_mae <= 0.85 * best;
    std::string detail = fmt("test t=30 MAE: MLP %.3f, train-mean %.3f, best baseline %.3f", r.mlp_mae, r.mean_mae, best) +
                         " (" + best_name + ")" +
                         fmt("; gains %.1f%% / %.1f%%", 100 * (1 - r.mlp_mae / r.mean_mae), 100 * (1 - r.mlp_mae / best)) +
                         fmt(", n=%.0f", static_cast<double>(r.n_test));
    return {ok, detail};
}

Outcome determinism() {
    if (!first_run || !first_run->ok) {
        first_run = run_pipeline(kRunA);
        if (!first_run->ok) return {false, "first run failed: " + first_run->error};
    }
    const auto second = run_pipeline(kRunB);
    if (!second.ok) return {false, "second run failed: " + second.error};
    std::size_t differing = 0, compared = 0;
    std::string first_diff;
    for (const auto& name : pipeline_outputs()) {
        const auto a = testing::read_file((kRunA / name).string());
        const auto b = testing::read_file((kRunB / name).string());
        ++compared;
        if (a.empty() || a != b) {
            ++differing;
            if (first_diff.empty()) first_diff = name;
        }
    }
    fs::remove_all(kRunA);
    fs::remove_all(kRunB);
    return {differing == 0, fmt("%.0f of %.0f output files byte-identical", static_cast<double>(compared - differing),
                                static_cast<double>(compared)) +
                                (first_diff.empty() ? "" : "; first difference in " + first_diff)};
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "location transform", 1, location_transform},
        {2, "fusion layout", 5, fusion_layout},
        {3, "MLP gradient check", 30, gradient_check},
        {4, "Adam first step", 1, adam_first_step},
        {5, "early stopping", 1, early_stopping},
        {6, "forecaster oracles", 10, forecaster_oracles},
        {7, "AR plant and recover", 1, ar_plant_and_recover},
        {8, "metrics", 1, metrics},
        {9, "serializer", 5, serializer},
        {10, "synthetic shape", 60, synthetic_shape},
        {11, "MLP vs baselines at t=30", 600, relative_ordering},
        {12, "determinism", 1200, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds <= c.budget_seconds;
        const bool pass = outcome.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("criterion %2d: %s  %s: %s [%.2fs, budget %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.title,
                    outcome.detail.c_str(), seconds, c.budget_seconds, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
