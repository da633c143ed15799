#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tvaudit/errors.hpp"

namespace tvaudit {

// splitmix64 finalizer. Used to decorrelate seeds derived from a base seed.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-task seed for task `index` under a base seed. Generators built from
// derived seeds give results identical to sequential evaluation regardless
// of how the tasks are scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index));
}

// 53-bit uniform draw in [0, 1). Bypasses std::uniform_real_distribution so
// the stream is identical on every platform for a given seed.
inline double next_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Throws InvalidDistribution unless every entry is finite and nonnegative
// and the entries sum to 1 within 1e-12.
void validate_distribution(std::span<const double> dist);

/// Inverse-CDF categorical sampler over a fixed weight vector.
///
/// Weights must be finite, nonnegative, with a positive sum; they are
/// normalized internally. Each draw costs one RNG call plus a binary search
/// over the cumulative vector.
class CategoricalSampler {
public:
    explicit CategoricalSampler(std::span<const double> weights);

    std::size_t draw(std::mt19937_64& gen) const;

    // n_samples independent draws, accumulated into a count vector.
    std::vector<std::int64_t> draw_counts(std::int64_t n_samples, std::mt19937_64& gen) const;

    std::size_t category_count() const { return cumulative_.size(); }

private:
    std::vector<double> cumulative_;
};

} // namespace tvaudit
