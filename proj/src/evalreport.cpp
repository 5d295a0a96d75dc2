#include "jacfc/evalreport.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace jacfc {

namespace {

void check_inputs(std::span<const double> predictions, std::span<const double> labels) {
    if (predictions.size() != labels.size()) throw std::invalid_argument("prediction/label length mismatch");
    if (predictions.empty()) throw std::invalid_argument("cannot score an empty prediction set");
}

std::string format_prediction(double v) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, ptr);
}

}  // namespace

double round_half_up(double value) { return std::floor(value + 0.5); }

double mae(std::span<const double> predictions, std::span<const double> labels) {
    check_inputs(predictions, labels);
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) total += std::fabs(std::max(predictions[i], 0.0) - labels[i]);
    return total / static_cast<double>(predictions.size());
}

double male(std::span<const double> predictions, std::span<const double> labels) {
    check_inputs(predictions, labels);
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        total += std::fabs(round_half_up(std::max(predictions[i], 0.0)) - labels[i]);
    }
    return total / static_cast<double>(predictions.size());
}

std::string_view to_string(GroupBy group_by) {
    switch (group_by) {
        case GroupBy::Day:
            return "day";
        case GroupBy::Jac:
            return "jac";
        case GroupBy::Overall:
            return "overall";
    }
    return "overall";
}

GroupBy parse_group_by(std::string_view text) {
    if (text == "day") return GroupBy::Day;
    if (text == "jac") return GroupBy::Jac;
    if (text == "overall") return GroupBy::Overall;
    throw std::invalid_argument("unknown grouping '" + std::string(text) + "'");
}

EvalReport evaluate_grouped(std::span<const LabeledPrediction> predictions, GroupBy group_by) {
    if (predictions.empty()) throw std::invalid_argument("cannot evaluate an empty prediction set");
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> groups;
    std::vector<double> all_pred, all_label;
    for (const auto& p : predictions) {
        all_pred.push_back(p.prediction);
        all_label.push_back(static_cast<double>(p.label));
        if (group_by == GroupBy::Overall) continue;
        auto& [pred, label] = groups[group_by == GroupBy::Day ? p.t : p.label];
        pred.push_back(p.prediction);
        label.push_back(static_cast<double>(p.label));
    }
    EvalReport report;
    auto add = [&](const std::string& group, const std::vector<double>& pred, const std::vector<double>& label) {
        report.rows.push_back({group_by, group, "MAE", mae(pred, label), pred.size()});
        report.rows.push_back({group_by, group, "MALE", male(pred, label), pred.size()});
    };
    for (const auto& [key, values] : groups) add(std::to_string(key), values.first, values.second);
    add("overall", all_pred, all_label);
    return report;
}

std::vector<LabeledPrediction> attach_labels(std::span<const CorpusPrediction> predictions,
                                             std::span<const Observation> observations) {
    std::map<std::pair<std::string, int>, int> labels;
    for (const auto& obs : observations) labels[{obs.job_id, obs.t}] = obs.jac;
    std::vector<LabeledPrediction> out;
    out.reserve(predictions.size());
    for (const auto& p : predictions) {
        auto it = labels.find({p.job_id, p.t});
        if (it == labels.end()) {
            throw DataError("no observation for prediction (" + p.job_id + ", " + std::to_string(p.t) + ")");
        }
        out.push_back({p.job_id, p.t, it->second, p.prediction});
    }
    return out;
}

void write_report(const std::string& path, const EvalReport& report) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "group_by,group,metric,value,n\n";
    char value[64];
    for (const auto& row : report.rows) {
        std::snprintf(value, sizeof(value), "%.3f", row.value);
        out << to_string(row.group_by) << ',' << row.group << ',' << row.metric << ',' << value << ',' << row.n << '\n';
    }
}

void emit_series_csv(std::span<const std::string> job_ids, std::span<const JobPosting> jobs,
                     std::span<const Observation> observations, std::span<const CorpusPrediction> predictions,
                     const std::string& path) {
    std::set<std::string_view> known;
    for (const auto& job : jobs) known.insert(job.job_id);
    std::map<std::string, std::map<int, int>, std::less<>> actual;
    for (const auto& id : job_ids) {
        if (!known.contains(id)) throw DataError("unknown job_id '" + id + "'");
        actual[id];
    }
    for (const auto& obs : observations) {
        auto it = actual.find(obs.job_id);
        if (it != actual.end()) it->second[obs.t] = obs.jac;
    }
    std::map<std::pair<std::string, int>, double> predicted;
    for (const auto& p : predictions) predicted[{p.job_id, p.t}] = p.prediction;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "job_id,t,actual,predicted\n";
    for (const auto& [job_id, series] : actual) {
        for (const auto& [t, jac] : series) {
            out << job_id << ',' << t << ',' << jac << ',';
            if (auto it = predicted.find({job_id, t}); it != predicted.end()) out << format_prediction(it->second);
            out << '\n';
        }
    }
}

}  // namespace jacfc
