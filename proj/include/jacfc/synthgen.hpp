#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "jacfc/datamodel.hpp"

namespace jacfc {

/// Relative split sizes (train, test, val).
struct SplitRatio {
    double train = 8.0;
    double test = 2.0;
    double val = 2.0;
};

struct GenConfig {
    std::size_t n_jobs = 1000;
    std::vector<int> horizons = {1, 3, 7, 14, 30};
    SplitRatio split_ratio;
    int max_jac = 75;
    std::uint64_t seed = 42;
    std::size_t title_vocab = 60;
    std::size_t company_vocab = 200;
    std::size_t skill_vocab = 80;
    double signal_strength = 0.8;
    /// Last day of the gapless daily history emitted alongside the
    /// observations; 0 selects the largest horizon before the final one.
    int history_days = 0;

    void validate() const;
    int effective_history_days() const;
};

struct GeneratedCorpus {
    Dataset dataset;
    /// Cumulative counts for every job on every day 1..history_days.
    std::vector<Observation> daily_history;
};

/// Deterministic in `config`; splits are not assigned.
GeneratedCorpus generate_corpus(const GenConfig& config);

/// Job-level split: shuffles jobs with `seed` and cuts the shuffled order by
/// `ratio`, so counts are exact up to rounding. Returns (job_id, split) rows in
/// corpus job order and tags `dataset.observations`.
std::vector<std::pair<std::string, Split>> split(Dataset& dataset, const SplitRatio& ratio, std::uint64_t seed);

/// Writes jobs.jsonl, observations.jsonl, splits.csv and daily.jsonl into `dir`.
void write_corpus(const std::string& dir, const GeneratedCorpus& corpus,
                  const std::vector<std::pair<std::string, Split>>& splits);

/// Fraction of jobs observed at `t`; peaks at day 7 and follows the relative
/// per-day dataset sizes of the reference corpus between anchors.
double horizon_availability(int t);

}  // namespace jacfc
