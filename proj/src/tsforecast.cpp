#include "jacfc/tsforecast.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace jacfc {

namespace {

void require_nonempty(std::span<const double> series, const char* method) {
    if (series.empty()) throw std::invalid_argument(std::string(method) + ": empty series");
}

void require_alpha(double alpha, const char* method) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument(std::string(method) + ": alpha must be in (0, 1]");
}

Forecast flat(std::string method, double value, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    return {std::move(method), std::vector<double>(horizon, value)};
}

std::string format_param(double v) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, ptr);
}

struct CrostonState {
    bool started = false;
    double size = 0.0;
    double interval = 0.0;
};

/// Runs the Croston recursion; when `sse` is non-null, accumulates the
/// squared one-step error of the demand-rate forecast after the first demand.
CrostonState croston_recursion(std::span<const double> series, double alpha, double* sse) {
    CrostonState state;
    std::size_t since_demand = 0;
    for (double y : series) {
        ++since_demand;
        if (sse && state.started) {
            const double err = y - state.size / state.interval;
            *sse += err * err;
        }
        if (y > 0.0) {
            const double q = static_cast<double>(since_demand);
            if (!state.started) {
                state.started = true;
                state.size = y;
                state.interval = q;
            } else {
                state.size = alpha * y + (1.0 - alpha) * state.size;
                state.interval = alpha * q + (1.0 - alpha) * state.interval;
            }
            since_demand = 0;
        }
    }
    return state;
}

}  // namespace

double ses_level(std::span<const double> series, double alpha) {
    require_nonempty(series, "ses");
    require_alpha(alpha, "ses");
    double level = series[0];
    for (std::size_t t = 1; t < series.size(); ++t) level = alpha * series[t] + (1.0 - alpha) * level;
    return level;
}

Forecast ses(std::span<const double> series, double alpha, std::size_t horizon) {
    return flat("ses", ses_level(series, alpha), horizon);
}

double croston_optimal_alpha(std::span<const double> series) {
    double best_alpha = 0.05;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 19; ++k) {
        const double alpha = k / 20.0;
        double sse = 0.0;
        croston_recursion(series, alpha, &sse);
        if (sse < best_sse) {
            best_sse = sse;
            best_alpha = alpha;
        }
    }
    return best_alpha;
}

Forecast croston(std::span<const double> series, double alpha, CrostonVariant variant, std::size_t horizon) {
    require_nonempty(series, "croston");
    if (variant == CrostonVariant::Optimized) alpha = croston_optimal_alpha(series);
    require_alpha(alpha, "croston");
    const CrostonState state = croston_recursion(series, alpha, nullptr);
    double value = state.started ? state.size / state.interval : 0.0;
    if (variant == CrostonVariant::Sba) value *= 1.0 - alpha / 2.0;
    const char* name = variant == CrostonVariant::Classic ? "croston" : (variant == CrostonVariant::Sba ? "croston-sba" : "croston-optimized");
    return flat(name, value, horizon);
}

Forecast tsb(std::span<const double> series, double alpha_demand, double alpha_probability, std::size_t horizon) {
    require_nonempty(series, "tsb");
    require_alpha(alpha_demand, "tsb");
    require_alpha(alpha_probability, "tsb");
    double probability = series[0] > 0.0 ? 1.0 : 0.0;
    bool seen_demand = series[0] > 0.0;
    double size = seen_demand ? series[0] : 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double y = series[t];
        const double occurred = y > 0.0 ? 1.0 : 0.0;
        probability = alpha_probability * occurred + (1.0 - alpha_probability) * probability;
        if (y > 0.0) {
            size = seen_demand ? alpha_demand * y + (1.0 - alpha_demand) * size : y;
            seen_demand = true;
        }
    }
    return flat("tsb", probability * size, horizon);
}

Forecast adida(std::span<const double> series, std::size_t bucket_size, double alpha, std::size_t horizon) {
    if (bucket_size == 0) throw std::invalid_argument("adida: bucket size must be >= 1");
    if (series.size() < bucket_size) throw std::invalid_argument("adida: series shorter than one bucket");
    const std::size_t buckets = series.size() / bucket_size;
    const std::size_t skip = series.size() - buckets * bucket_size;  // oldest leftover days
    std::vector<double> aggregated(buckets, 0.0);
    for (std::size_t b = 0; b < buckets; ++b) {
        for (std::size_t i = 0; i < bucket_size; ++i) aggregated[b] += series[skip + b * bucket_size + i];
    }
    return flat("adida", ses_level(aggregated, alpha) / static_cast<double>(bucket_size), horizon);
}

Forecast imapa(std::span<const double> series, double alpha, std::size_t horizon) {
    require_nonempty(series, "imapa");
    const std::size_t max_level = std::max<std::size_t>(1, series.size() / 2);
    double total = 0.0;
    for (std::size_t k = 1; k <= max_level; ++k) total += adida(series, k, alpha, 1).at(1);
    return flat("imapa", total / static_cast<double>(max_level), horizon);
}

Forecast window_average(std::span<const double> series, std::size_t window, std::size_t horizon) {
    if (window == 0) throw std::invalid_argument("window-average: window must be >= 1");
    if (series.size() < window) throw std::invalid_argument("window-average: series shorter than window");
    const auto tail = series.subspan(series.size() - window);
    return flat("window-average", std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(window), horizon);
}

ArFit fit_autoregressive(std::span<const double> series, std::span<const int> lags) {
    if (lags.empty()) throw std::invalid_argument("ar: at least one lag is required");
    int max_lag = 0;
    for (int lag : lags) {
        if (lag < 1) throw std::invalid_argument("ar: lags must be >= 1");
        max_lag = std::max(max_lag, lag);
    }
    if (series.size() <= static_cast<std::size_t>(max_lag) + 1) {
        throw std::invalid_argument("ar: insufficient data, need more than " + std::to_string(max_lag + 1) +
                                    " observations");
    }
    const auto rows = static_cast<Eigen::Index>(series.size()) - max_lag;
    const auto cols = static_cast<Eigen::Index>(lags.size()) + 1;
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = static_cast<std::size_t>(r + max_lag);
        design(r, 0) = 1.0;
        for (std::size_t j = 0; j < lags.size(); ++j) {
            design(r, static_cast<Eigen::Index>(j) + 1) = series[t - static_cast<std::size_t>(lags[j])];
        }
        target(r) = series[t];
    }
    const Eigen::VectorXd beta = design.completeOrthogonalDecomposition().solve(target);
    ArFit fit;
    fit.intercept = beta(0);
    for (Eigen::Index j = 1; j < cols; ++j) fit.coefficients.push_back(beta(j));
    return fit;
}

Forecast autoregressive(std::span<const double> series, std::span<const int> lags, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    const ArFit fit = fit_autoregressive(series, lags);
    std::vector<double> extended(series.begin(), series.end());
    Forecast forecast{"ar", {}};
    for (std::size_t h = 0; h < horizon; ++h) {
        double next = fit.intercept;
        for (std::size_t j = 0; j < lags.size(); ++j) {
            next += fit.coefficients[j] * extended[extended.size() - static_cast<std::size_t>(lags[j])];
        }
        extended.push_back(next);
        forecast.values.push_back(next);
    }
    return forecast;
}

std::string MethodSpec::label() const {
    if (name == "ses") return "SES(alpha=" + format_param(alpha) + ")";
    if (name == "croston") return "CrostonClassic(alpha=" + format_param(croston_alpha) + ")";
    if (name == "croston-sba") return "CrostonSBA(alpha=" + format_param(croston_alpha) + ")";
    if (name == "croston-optimized") return "CrostonOptimized";
    if (name == "tsb") return "TSB(" + format_param(alpha_demand) + "," + format_param(alpha_probability) + ")";
    if (name == "adida") return "ADIDA(bucket=" + std::to_string(bucket) + ")";
    if (name == "imapa") return "IMAPA";
    if (name == "window-average") return "WindowAverage(window_size=" + std::to_string(window) + ")";
    if (name == "ar") {
        std::string out = "AutoRegressive(lags=[";
        for (std::size_t i = 0; i < lags.size(); ++i) out += (i ? "," : "") + std::to_string(lags[i]);
        return out + "])";
    }
    return name;
}

Forecast run_method(const MethodSpec& method, std::span<const double> series, std::size_t horizon) {
    const auto& n = method.name;
    if (n == "ses") return ses(series, method.alpha, horizon);
    if (n == "croston") return croston(series, method.croston_alpha, CrostonVariant::Classic, horizon);
    if (n == "croston-sba") return croston(series, method.croston_alpha, CrostonVariant::Sba, horizon);
    if (n == "croston-optimized") return croston(series, method.croston_alpha, CrostonVariant::Optimized, horizon);
    if (n == "tsb") return tsb(series, method.alpha_demand, method.alpha_probability, horizon);
    if (n == "adida") return adida(series, method.bucket, method.alpha, horizon);
    if (n == "imapa") return imapa(series, method.alpha, horizon);
    if (n == "window-average") return window_average(series, method.window, horizon);
    if (n == "ar") return autoregressive(series, method.lags, horizon);
    throw std::invalid_argument("unknown forecasting method '" + n + "'");
}

std::map<std::string, CountSeries, std::less<>> build_series(std::span<const Observation> history, int target_day,
                                                             std::vector<SkippedJob>& skipped) {
    std::map<std::string, std::map<int, int>, std::less<>> by_job;
    for (const auto& obs : history) {
        if (obs.t < target_day) by_job[obs.job_id][obs.t] = obs.jac;
    }
    std::map<std::string, CountSeries, std::less<>> series;
    for (const auto& [job_id, points] : by_job) {
        CountSeries s{job_id, {}};
        int expected = 1;
        bool gapless = true;
        for (const auto& [t, jac] : points) {
            if (t != expected) {
                gapless = false;
                break;
            }
            s.values.push_back(static_cast<double>(jac));
            ++expected;
        }
        if (!gapless) {
            skipped.push_back({job_id, "history is not a gapless daily series starting at day 1"});
            continue;
        }
        series.emplace(job_id, std::move(s));
    }
    return series;
}

CorpusForecast forecast_corpus(std::span<const std::string> job_ids, std::span<const Observation> history,
                               const MethodSpec& method, int target_day) {
    if (target_day < 2) throw std::invalid_argument("target day must be >= 2");
    CorpusForecast result;
    std::vector<SkippedJob> gap_skips;
    const auto series = build_series(history, target_day, gap_skips);
    std::map<std::string, std::string, std::less<>> gap_reason;
    for (auto& s : gap_skips) gap_reason.emplace(s.job_id, s.reason);

    for (const auto& job_id : job_ids) {
        auto it = series.find(job_id);
        if (it == series.end()) {
            auto gap = gap_reason.find(job_id);
            result.skipped.push_back({job_id, gap != gap_reason.end() ? gap->second : "no history before target day"});
            continue;
        }
        const auto& values = it->second.values;
        const std::size_t horizon = static_cast<std::size_t>(target_day) - values.size();
        try {
            const Forecast forecast = run_method(method, values, horizon);
            result.predictions.push_back({job_id, target_day, std::max(0.0, forecast.at(horizon))});
        } catch (const std::invalid_argument& e) {
            result.skipped.push_back({job_id, e.what()});
        }
    }
    return result;
}

void write_predictions(const std::string& path, std::span<const CorpusPrediction> predictions) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "job_id,t,prediction\n";
    for (const auto& p : predictions) out << p.job_id << ',' << p.t << ',' << format_param(p.prediction) << '\n';
}

std::vector<CorpusPrediction> read_predictions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<CorpusPrediction> predictions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.rfind("job_id,", 0) == 0)) continue;
        const auto c2 = line.rfind(',');
        const auto c1 = c2 == std::string::npos ? std::string::npos : line.rfind(',', c2 - 1);
        if (c1 == std::string::npos || c2 == 0) {
            throw DataError("expected 'job_id,t,prediction' at line " + std::to_string(line_no), line_no);
        }
        CorpusPrediction p;
        p.job_id = line.substr(0, c1);
        const std::string_view t_text(line.data() + c1 + 1, c2 - c1 - 1);
        const std::string_view v_text(line.data() + c2 + 1, line.size() - c2 - 1);
        auto [tp, tec] = std::from_chars(t_text.data(), t_text.data() + t_text.size(), p.t);
        auto [vp, vec] = std::from_chars(v_text.data(), v_text.data() + v_text.size(), p.prediction);
        if (tec != std::errc() || vec != std::errc() || tp != t_text.data() + t_text.size() ||
            vp != v_text.data() + v_text.size() || !std::isfinite(p.prediction)) {
            throw DataError("malformed prediction at line " + std::to_string(line_no), line_no);
        }
        predictions.push_back(std::move(p));
    }
    return predictions;
}

}  // namespace jacfc
