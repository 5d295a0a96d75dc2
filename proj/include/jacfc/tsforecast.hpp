#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "jacfc/datamodel.hpp"

namespace jacfc {

/// Gapless daily counts y_1..y_T of one job.
struct CountSeries {
    std::string job_id;
    std::vector<double> values;
};

struct Forecast {
    std::string method;
    std::vector<double> values;  // one per horizon step

    double at(std::size_t step) const { return values.at(step - 1); }
};

enum class CrostonVariant { Classic, Sba, Optimized };

/// SES level after the whole series (l_1 = y_1).
double ses_level(std::span<const double> series, double alpha);

Forecast ses(std::span<const double> series, double alpha, std::size_t horizon);
Forecast croston(std::span<const double> series, double alpha, CrostonVariant variant, std::size_t horizon);
Forecast tsb(std::span<const double> series, double alpha_demand, double alpha_probability, std::size_t horizon);
Forecast adida(std::span<const double> series, std::size_t bucket_size, double alpha, std::size_t horizon);
Forecast imapa(std::span<const double> series, double alpha, std::size_t horizon);
Forecast window_average(std::span<const double> series, std::size_t window, std::size_t horizon);
Forecast autoregressive(std::span<const double> series, std::span<const int> lags, std::size_t horizon);

/// Smoothing constant chosen by CrostonOptimized on the 0.05..0.95 grid.
double croston_optimal_alpha(std::span<const double> series);

struct ArFit {
    double intercept = 0.0;
    std::vector<double> coefficients;  // one per lag
};

/// Least-squares (least-norm when singular) fit of y_t = c + sum phi_j y_{t-lag_j}.
ArFit fit_autoregressive(std::span<const double> series, std::span<const int> lags);

/// Method name plus parameters, using the CLI spellings
/// (ses, croston, croston-sba, croston-optimized, tsb, adida, imapa,
/// window-average, ar).
struct MethodSpec {
    std::string name = "ses";
    double alpha = 0.5;  // ses, adida, imapa
    double croston_alpha = 0.1;
    double alpha_demand = 0.3;
    double alpha_probability = 0.2;
    std::size_t bucket = 2;
    std::size_t window = 3;
    std::vector<int> lags = {2};

    std::string label() const;
};

Forecast run_method(const MethodSpec& method, std::span<const double> series, std::size_t horizon);

struct CorpusPrediction {
    std::string job_id;
    int t = 0;
    double prediction = 0.0;
};

struct SkippedJob {
    std::string job_id;
    std::string reason;
};

struct CorpusForecast {
    std::vector<CorpusPrediction> predictions;
    std::vector<SkippedJob> skipped;
};

/// Builds per-job daily series from observations with t < target_day. A job's
/// history must start at day 1 and have no gaps.
std::map<std::string, CountSeries, std::less<>> build_series(std::span<const Observation> history, int target_day,
                                                             std::vector<SkippedJob>& skipped);

/// Per-job forecast at `target_day` from each job's own past; predictions are
/// clamped at 0. `job_ids` lists the jobs to forecast, in output order.
CorpusForecast forecast_corpus(std::span<const std::string> job_ids, std::span<const Observation> history,
                               const MethodSpec& method, int target_day);

void write_predictions(const std::string& path, std::span<const CorpusPrediction> predictions);
std::vector<CorpusPrediction> read_predictions(const std::string& path);

}  // namespace jacfc
