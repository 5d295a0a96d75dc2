#pragma once

#include <span>
#include <string>
#include <vector>

#include "jacfc/datamodel.hpp"
#include "jacfc/tsforecast.hpp"

namespace jacfc {

/// Mean |max(pred, 0) - label|.
double mae(std::span<const double> predictions, std::span<const double> labels);

/// MAE after casting each prediction to an integer label:
/// round-half-up of max(pred, 0).
double male(std::span<const double> predictions, std::span<const double> labels);

double round_half_up(double value);

enum class GroupBy { Day, Jac, Overall };

std::string_view to_string(GroupBy group_by);
GroupBy parse_group_by(std::string_view text);

struct LabeledPrediction {
    std::string job_id;
    int t = 0;
    int label = 0;
    double prediction = 0.0;
};

struct ReportRow {
    GroupBy group_by = GroupBy::Overall;
    std::string group;  // day value, jac value, or "overall"
    std::string metric;  // "MAE" or "MALE"
    double value = 0.0;
    std::size_t n = 0;
};

struct EvalReport {
    std::vector<ReportRow> rows;
};

/// One MAE and one MALE row per non-empty group, groups ascending, the
/// overall rows last.
EvalReport evaluate_grouped(std::span<const LabeledPrediction> predictions, GroupBy group_by);

/// Joins predictions to observation labels on (job_id, t). Predictions with no
/// matching observation are an error.
std::vector<LabeledPrediction> attach_labels(std::span<const CorpusPrediction> predictions,
                                             std::span<const Observation> observations);

/// `report.csv`: group_by,group,metric,value,n with values to 3 decimals.
void write_report(const std::string& path, const EvalReport& report);

/// CSV job_id,t,actual,predicted sorted by (job_id, t); missing predictions
/// leave the predicted cell empty.
void emit_series_csv(std::span<const std::string> job_ids, std::span<const JobPosting> jobs,
                     std::span<const Observation> observations, std::span<const CorpusPrediction> predictions,
                     const std::string& path);

}  // namespace jacfc
