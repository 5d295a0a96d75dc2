#include "jacfc/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "jacfc/datamodel.hpp"
#include "jacfc/evalreport.hpp"
#include "jacfc/featfusion.hpp"
#include "jacfc/feature_io.hpp"
#include "jacfc/lmserialize.hpp"
#include "jacfc/model_io.hpp"
#include "jacfc/synthgen.hpp"
#include "jacfc/trainer.hpp"
#include "jacfc/tsforecast.hpp"

namespace jacfc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;
constexpr const char* kDataDirEnv = "JACFC_DATA_DIR";

std::string in_dir(const std::string& dir, const char* file) { return (fs::path(dir) / file).string(); }

/// Paths of the corpus files; explicit flags override the data directory.
struct CorpusPaths {
    std::string data_dir = "data";
    std::string jobs, observations, splits;

    void add_options(CLI::App* cmd, bool with_splits = true) {
        cmd->add_option("--data", data_dir, "Directory holding jobs.jsonl, observations.jsonl, splits.csv")
            ->envname(kDataDirEnv);
        cmd->add_option("--jobs", jobs, "Jobs JSONL (default <data>/jobs.jsonl)");
        cmd->add_option("--obs", observations, "Observations JSONL (default <data>/observations.jsonl)");
        if (with_splits) cmd->add_option("--splits", splits, "Splits CSV (default <data>/splits.csv)");
    }
    std::string jobs_path() const { return jobs.empty() ? in_dir(data_dir, "jobs.jsonl") : jobs; }
    std::string observations_path() const {
        return observations.empty() ? in_dir(data_dir, "observations.jsonl") : observations;
    }
    std::string splits_path() const { return splits.empty() ? in_dir(data_dir, "splits.csv") : splits; }

    Dataset load(bool with_splits = true) const {
        Dataset dataset;
        dataset.jobs = load_jobs(jobs_path());
        dataset.observations = load_observations(observations_path(), job_id_set(dataset.jobs));
        if (with_splits) apply_job_splits(dataset, load_splits(splits_path()));
        return dataset;
    }
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad integer '" + item + "'");
        values.push_back(v);
    }
    return values;
}

void ensure_parent(const std::string& path) {
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
    GenConfig config;
    std::string out = "data";
    std::string horizons = "1,3,7,14,30";
    std::vector<double> split_ratio = {8, 2, 2};
};

json run_generate(const GenerateArgs& args) {
    GenConfig config = args.config;
    config.horizons = parse_int_list(args.horizons);
    if (args.split_ratio.size() != 3) throw std::invalid_argument("--split-ratio needs three values");
    config.split_ratio = {args.split_ratio[0], args.split_ratio[1], args.split_ratio[2]};
    auto corpus = generate_corpus(config);
    const auto rows = split(corpus.dataset, config.split_ratio, config.seed);
    write_corpus(args.out, corpus, rows);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& [id, s] : rows) ++counts[static_cast<int>(s)];
    return {{"command", "generate"},
            {"out", args.out},
            {"jobs", corpus.dataset.jobs.size()},
            {"observations", corpus.dataset.observations.size()},
            {"daily_history", corpus.daily_history.size()},
            {"train_jobs", counts[0]},
            {"test_jobs", counts[1]},
            {"val_jobs", counts[2]}};
}

// ---- featurize -------------------------------------------------------------

struct FeaturizeArgs {
    CorpusPaths corpus;
    std::string skills;
    std::string out = "features.bin";
    FusionConfig fusion;
    std::string days;
};

json run_featurize(const FeaturizeArgs& args) {
    const Dataset dataset = args.corpus.load();
    SkillEmbeddingTable table;
    FusionConfig base = args.fusion;
    if (!args.skills.empty()) {
        table = load_skill_table(args.skills);
        base.skill_dim = table.dimension;
    }
    if (base.include_day) {
        if (!args.days.empty()) {
            base.days = parse_int_list(args.days);
        } else {
            std::set<int> seen;
            for (const auto& obs : dataset.observations) seen.insert(obs.t);
            base.days.assign(seen.begin(), seen.end());
        }
    }
    std::vector<JobPosting> training_jobs;
    {
        std::set<std::string> train_ids;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (dataset.splits[i] == Split::Train) train_ids.insert(dataset.observations[i].job_id);
        }
        for (const auto& job : dataset.jobs) {
            if (train_ids.contains(job.job_id)) training_jobs.push_back(job);
        }
    }
    const FusionConfig config = fit_fusion_config(training_jobs, base);
    const FeatureMatrix features = featurize(dataset, table, config);
    ensure_parent(args.out);
    write_features(args.out, features);
    json layout = json::object();
    for (const auto& span : features.layout) layout[span.name] = span.length;
    return {{"command", "featurize"}, {"out", args.out}, {"rows", features.rows()}, {"width", features.width()},
            {"layout", layout}};
}

// ---- serialize -------------------------------------------------------------

struct SerializeArgs {
    CorpusPaths corpus;
    std::string prefix;
    bool joint = false;
};

json run_serialize(const SerializeArgs& args) {
    const Dataset dataset = args.corpus.load();
    const std::string prefix = args.prefix.empty() ? in_dir(args.corpus.data_dir, "lm_dataset") : args.prefix;
    ensure_parent(prefix);
    export_lm_dataset(dataset, TemplateConfig{}, prefix, args.joint);
    return {{"command", "serialize"}, {"prefix", prefix}, {"records", dataset.size()}, {"joint", args.joint}};
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
    std::string features;
    std::string embeddings;
    CorpusPaths corpus;
    std::string mode = "joint";
    std::string out = "model.json";
    std::string history = "history.csv";
    TrainConfig config;
    std::string hidden = "256,128,64,32";
};

json run_train(const TrainArgs& args) {
    FeatureMatrix features;
    if (!args.features.empty() && !args.embeddings.empty()) {
        throw std::invalid_argument("give either --features or --embeddings, not both");
    }
    if (!args.features.empty()) {
        features = read_features(args.features);
    } else if (!args.embeddings.empty()) {
        features = embeddings_to_features(import_embeddings(args.embeddings), args.corpus.load());
    } else {
        throw std::invalid_argument("train needs --features or --embeddings");
    }
    TrainConfig config = args.config;
    config.hidden_dims.clear();
    for (int d : parse_int_list(args.hidden)) {
        if (d < 1) throw std::invalid_argument("hidden widths must be positive");
        config.hidden_dims.push_back(static_cast<std::size_t>(d));
    }
    const TrainMode mode = parse_train_mode(args.mode);

    ModelBundle bundle;
    bundle.mode = mode;
    bundle.layout = features.layout;
    bundle.featurizer = features.featurizer;
    std::vector<std::pair<std::optional<int>, std::vector<EpochRecord>>> histories;
    json summary_models = json::array();

    std::vector<std::optional<int>> groups;
    if (mode == TrainMode::Joint) {
        const bool has_day = std::any_of(features.layout.begin(), features.layout.end(),
                                         [](const LayoutSpan& s) { return s.name == "day"; });
        std::set<int> days;
        for (const auto& key : features.keys) days.insert(key.t);
        // imported embeddings carry the day in the paragraph text
        if (!has_day && days.size() > 1 && args.embeddings.empty()) {
            throw std::invalid_argument("joint training over several days needs features built with --include-day");
        }
        groups.push_back(std::nullopt);
    } else {
        std::set<int> days;
        for (const auto& key : features.keys) days.insert(key.t);
        groups.assign(days.begin(), days.end());
    }
    for (const auto& day : groups) {
        const TrainingData data = training_data(features, day);
        const std::string where = day ? " for day " + std::to_string(*day) : std::string();
        if (data.train_rows.empty()) throw std::invalid_argument("empty training split" + where);
        if (data.val_rows.empty()) throw std::invalid_argument("empty validation split" + where);
        TrainResult result = train(data, config);
        json entry = {{"day", day ? json(*day) : json(nullptr)},
                      {"epochs", result.history.size()},
                      {"best_epoch", result.best_epoch}};
        if (result.best_epoch > 0) entry["best_val_mae"] = result.history[result.best_epoch - 1].val_mae;
        summary_models.push_back(entry);
        histories.emplace_back(day, std::move(result.history));
        bundle.entries.push_back({day, std::move(result.model)});
    }
    ensure_parent(args.out);
    save_model(args.out, bundle);
    if (!args.history.empty()) {
        ensure_parent(args.history);
        write_history(args.history, mode, histories);
    }
    return {{"command", "train"}, {"mode", args.mode}, {"out", args.out}, {"models", summary_models}};
}

// ---- predict ---------------------------------------------------------------

struct PredictArgs {
    std::string model;
    std::string features;
    std::string out = "predictions.csv";
    std::string split;
    int day = 0;
};

json run_predict(const PredictArgs& args) {
    const ModelBundle bundle = load_model(args.model);
    const FeatureMatrix features = read_features(args.features);
    if (features.layout != bundle.layout) throw DataError("feature layout does not match the model's layout");
    std::optional<Split> only_split;
    if (!args.split.empty()) only_split = parse_split(args.split);

    std::vector<CorpusPrediction> predictions;
    std::map<const MlpModel*, std::vector<std::size_t>> rows_by_model;
    std::vector<std::size_t> selected;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto& key = features.keys[r];
        if (only_split && key.split != *only_split) continue;
        if (args.day > 0 && key.t != args.day) continue;
        selected.push_back(r);
    }
    std::vector<double> values(features.rows(), 0.0);
    for (std::size_t r : selected) rows_by_model[&bundle.model_for(features.keys[r].t)].push_back(r);
    for (const auto& [model, rows] : rows_by_model) {
        RowMatrix subset(static_cast<Eigen::Index>(rows.size()), features.values.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            subset.row(static_cast<Eigen::Index>(i)) = features.values.row(static_cast<Eigen::Index>(rows[i]));
        }
        const auto out = predict_rows(*model, subset);
        for (std::size_t i = 0; i < rows.size(); ++i) values[rows[i]] = out[i];
    }
    for (std::size_t r : selected) predictions.push_back({features.keys[r].job_id, features.keys[r].t, values[r]});
    ensure_parent(args.out);
    write_predictions(args.out, predictions);
    return {{"command", "predict"}, {"out", args.out}, {"predictions", predictions.size()}};
}

// ---- forecast-ts -----------------------------------------------------------

struct ForecastArgs {
    std::string history;
    std::string jobs;
    std::string splits;
    std::string split;
    std::string out = "ts_predictions.csv";
    int target_day = 30;
    MethodSpec method;
    std::string lags = "2";
};

json run_forecast(const ForecastArgs& args, const std::string& method_name) {
    MethodSpec method = args.method;
    method.name = method_name;
    method.lags = parse_int_list(args.lags);

    std::vector<Observation> history;
    std::vector<std::string> job_ids;
    if (!args.jobs.empty()) {
        const auto jobs = load_jobs(args.jobs);
        history = load_observations(args.history, job_id_set(jobs));
        for (const auto& job : jobs) job_ids.push_back(job.job_id);
    } else {
        history = load_observations(args.history);
        std::set<std::string> ids;
        for (const auto& obs : history) ids.insert(obs.job_id);
        job_ids.assign(ids.begin(), ids.end());
    }
    if (!args.split.empty()) {
        if (args.splits.empty()) throw std::invalid_argument("--split needs --splits");
        const Split wanted = parse_split(args.split);
        const auto splits = load_splits(args.splits);
        std::erase_if(job_ids, [&](const std::string& id) {
            auto it = splits.find(id);
            return it == splits.end() || it->second != wanted;
        });
    }
    const CorpusForecast result = forecast_corpus(job_ids, history, method, args.target_day);
    ensure_parent(args.out);
    write_predictions(args.out, result.predictions);
    json skipped = json::array();
    for (const auto& s : result.skipped) skipped.push_back({{"job_id", s.job_id}, {"reason", s.reason}});
    return {{"command", "forecast-ts"},
            {"method", method.label()},
            {"out", args.out},
            {"predictions", result.predictions.size()},
            {"skipped", skipped.size()},
            {"skip_report", skipped}};
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
    std::string predictions;
    std::string observations;
    std::string group_by = "day";
    std::string out = "report.csv";
    bool drop_unlabeled = false;
};

json run_evaluate(const EvaluateArgs& args) {
    auto predictions = read_predictions(args.predictions);
    const auto observations = load_observations(args.observations);
    std::size_t dropped = 0;
    if (args.drop_unlabeled) {
        std::set<std::pair<std::string, int>> labeled_keys;
        for (const auto& obs : observations) labeled_keys.emplace(obs.job_id, obs.t);
        dropped = std::erase_if(predictions, [&](const CorpusPrediction& p) {
            return !labeled_keys.contains({p.job_id, p.t});
        });
    }
    const auto labeled = attach_labels(predictions, observations);
    const EvalReport report = evaluate_grouped(labeled, parse_group_by(args.group_by));
    ensure_parent(args.out);
    write_report(args.out, report);
    json overall = json::object();
    for (const auto& row : report.rows) {
        if (row.group == "overall") overall[row.metric] = row.value;
    }
    return {{"command", "evaluate"}, {"out", args.out}, {"rows", report.rows.size()}, {"n", labeled.size()},
            {"dropped", dropped}, {"overall", overall}};
}

// ---- report-series ---------------------------------------------------------

struct SeriesArgs {
    CorpusPaths corpus;
    std::string predictions;
    std::vector<std::string> job_ids;
    std::string out = "series.csv";
};

json run_series(const SeriesArgs& args) {
    const Dataset dataset = args.corpus.load(false);
    std::vector<CorpusPrediction> predictions;
    if (!args.predictions.empty()) predictions = read_predictions(args.predictions);
    ensure_parent(args.out);
    emit_series_csv(args.job_ids, dataset.jobs, dataset.observations, predictions, args.out);
    return {{"command", "report-series"}, {"out", args.out}, {"jobs", args.job_ids.size()}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Job application count forecasting toolkit", "jacfc"};
    app.set_config("--config", "", "Read flag values from a key=value file");
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic corpus");
    generate->add_option("--n-jobs", gen.config.n_jobs, "Number of jobs")->capture_default_str();
    generate->add_option("--seed", gen.config.seed, "Random seed")->capture_default_str();
    generate->add_option("--out", gen.out, "Output directory")->envname(kDataDirEnv)->capture_default_str();
    generate->add_option("--horizons", gen.horizons, "Observed day values")->capture_default_str();
    generate->add_option("--split-ratio", gen.split_ratio, "train,test,val")->delimiter(',')->expected(3);
    generate->add_option("--max-jac", gen.config.max_jac, "Largest count")->capture_default_str();
    generate->add_option("--signal-strength", gen.config.signal_strength, "Feature signal in [0,1]")
        ->capture_default_str();
    generate->add_option("--history-days", gen.config.history_days, "Days of daily history (0 = auto)");
    generate->add_option("--title-vocab", gen.config.title_vocab)->capture_default_str();
    generate->add_option("--company-vocab", gen.config.company_vocab)->capture_default_str();
    generate->add_option("--skill-vocab", gen.config.skill_vocab)->capture_default_str();

    FeaturizeArgs feat;
    auto* featurize_cmd = app.add_subcommand("featurize", "Build fused feature vectors");
    feat.corpus.add_options(featurize_cmd);
    featurize_cmd->add_option("--skills", feat.skills, "Skill embedding table (TSV)");
    featurize_cmd->add_option("--skill-dim", feat.fusion.skill_dim, "Skill dimension without a table")
        ->capture_default_str();
    featurize_cmd->add_option("--d-company", feat.fusion.d_company)->capture_default_str();
    featurize_cmd->add_option("--d-title", feat.fusion.d_title)->capture_default_str();
    featurize_cmd->add_option("--d-desc", feat.fusion.d_desc)->capture_default_str();
    featurize_cmd->add_flag("--include-day", feat.fusion.include_day, "Append a one-hot day block");
    featurize_cmd->add_option("--days", feat.days, "Day values for the day block (default: observed days)");
    featurize_cmd->add_option("--out", feat.out, "Feature file (.bin or .csv)")->capture_default_str();

    SerializeArgs ser;
    auto* serialize = app.add_subcommand("serialize", "Export paragraphs for language-model fine-tuning");
    ser.corpus.add_options(serialize);
    serialize->add_option("--out-prefix", ser.prefix, "Output prefix (default <data>/lm_dataset)");
    serialize->add_flag("--joint", ser.joint, "Include the day sentence");

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train the MLP regressor");
    train_cmd->add_option("--features", tr.features, "Feature file");
    train_cmd->add_option("--embeddings", tr.embeddings, "Imported embeddings TSV (uses --data/--jobs/--obs/--splits)");
    tr.corpus.add_options(train_cmd);
    train_cmd->add_option("--mode", tr.mode, "joint or separate")
        ->check(CLI::IsMember({"joint", "separate"}))
        ->capture_default_str();
    train_cmd->add_option("--out", tr.out, "Model file")->capture_default_str();
    train_cmd->add_option("--history", tr.history, "History CSV")->capture_default_str();
    train_cmd->add_option("--lr", tr.config.adam.learning_rate)->capture_default_str();
    train_cmd->add_option("--batch-size", tr.config.batch_size)->capture_default_str();
    train_cmd->add_option("--max-epochs", tr.config.max_epochs)->capture_default_str();
    train_cmd->add_option("--patience", tr.config.patience)->capture_default_str();
    train_cmd->add_option("--hidden", tr.hidden, "Hidden layer widths")->capture_default_str();
    train_cmd->add_option("--seed", tr.config.seed)->capture_default_str();

    PredictArgs pred;
    auto* predict = app.add_subcommand("predict", "Predict counts with a trained model");
    predict->add_option("--model", pred.model, "Model file")->required();
    predict->add_option("--features", pred.features, "Feature file")->required();
    predict->add_option("--split", pred.split, "Only rows of this split")->check(CLI::IsMember({"train", "test", "val"}));
    predict->add_option("--day", pred.day, "Only rows at this day");
    predict->add_option("--out", pred.out, "Predictions CSV")->capture_default_str();

    ForecastArgs fc;
    auto* forecast = app.add_subcommand("forecast-ts", "Per-job time-series forecasts");
    forecast->add_option("--history", fc.history, "Daily observations JSONL")->required();
    forecast->add_option("--jobs", fc.jobs, "Jobs JSONL; jobs without history are reported as skipped");
    forecast->add_option("--splits", fc.splits, "Splits CSV");
    forecast->add_option("--split", fc.split, "Only jobs of this split")->check(CLI::IsMember({"train", "test", "val"}));
    forecast->add_option("--target-day", fc.target_day)->capture_default_str();
    forecast->add_option("--out", fc.out, "Predictions CSV")->capture_default_str();
    forecast->require_subcommand(1);
    std::string method_name;
    auto add_method = [&](const char* name, const char* help) {
        auto* m = forecast->add_subcommand(name, help);
        m->callback([&method_name, name] { method_name = name; });
        return m;
    };
    add_method("ses", "Simple exponential smoothing")->add_option("--alpha", fc.method.alpha)->capture_default_str();
    add_method("croston", "Croston classic")->add_option("--alpha", fc.method.croston_alpha)->capture_default_str();
    add_method("croston-sba", "Croston with the SBA correction")
        ->add_option("--alpha", fc.method.croston_alpha)
        ->capture_default_str();
    add_method("croston-optimized", "Croston with grid-searched alpha");
    auto* tsb_cmd = add_method("tsb", "Teunter-Syntetos-Babai");
    tsb_cmd->add_option("--alpha-d", fc.method.alpha_demand)->capture_default_str();
    tsb_cmd->add_option("--alpha-p", fc.method.alpha_probability)->capture_default_str();
    auto* adida_cmd = add_method("adida", "Aggregate-disaggregate");
    adida_cmd->add_option("--bucket", fc.method.bucket)->capture_default_str();
    adida_cmd->add_option("--alpha", fc.method.alpha)->capture_default_str();
    add_method("imapa", "Multiple aggregation levels")->add_option("--alpha", fc.method.alpha)->capture_default_str();
    add_method("window-average", "Mean of the last values")
        ->add_option("--window", fc.method.window)
        ->capture_default_str();
    add_method("ar", "Autoregression")->add_option("--lags", fc.lags, "Comma-separated lags")->capture_default_str();

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "MAE/MALE report");
    evaluate->add_option("--pred", ev.predictions, "Predictions CSV")->required();
    evaluate->add_option("--obs", ev.observations, "Observations JSONL with labels")->required();
    evaluate->add_option("--group-by", ev.group_by)
        ->check(CLI::IsMember({"day", "jac", "overall"}))
        ->capture_default_str();
    evaluate->add_option("--out", ev.out, "Report CSV")->capture_default_str();
    evaluate->add_flag("--drop-unlabeled", ev.drop_unlabeled, "Ignore predictions without a matching observation");

    SeriesArgs se;
    auto* series = app.add_subcommand("report-series", "Plot-ready actual vs predicted series");
    se.corpus.add_options(series, false);
    series->add_option("--pred", se.predictions, "Predictions CSV");
    series->add_option("--job-ids", se.job_ids, "Jobs to emit")->delimiter(',');
    series->add_option("--out", se.out, "Series CSV")->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        json summary;
        if (generate->parsed()) {
            summary = run_generate(gen);
        } else if (featurize_cmd->parsed()) {
            summary = run_featurize(feat);
        } else if (serialize->parsed()) {
            summary = run_serialize(ser);
        } else if (train_cmd->parsed()) {
            summary = run_train(tr);
        } else if (predict->parsed()) {
            summary = run_predict(pred);
        } else if (forecast->parsed()) {
            summary = run_forecast(fc, method_name);
        } else if (evaluate->parsed()) {
            summary = run_evaluate(ev);
        } else if (series->parsed()) {
            summary = run_series(se);
        }
        summary["status"] = "ok";
        out << summary.dump() << std::endl;
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << std::endl;
        return kExitRuntime;
    }
}

}  // namespace jacfc::cli
