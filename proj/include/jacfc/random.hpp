#pragma once

#include <cstdint>
#include <string_view>

namespace jacfc {

/// 64-bit FNV-1a. Stable across platforms; used for all feature hashing.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t salt = 0);

std::uint64_t splitmix64(std::uint64_t& state);

/// Mixes a run seed with a stream index (job number, layer number, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Small deterministic generator (xoshiro256**). The distributions are
/// implemented here rather than taken from <random> so that generated corpora
/// and initial weights are bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p);
    /// Standard normal (Box-Muller, one value per call).
    double normal();

private:
    std::uint64_t s_[4];
};

}  // namespace jacfc
