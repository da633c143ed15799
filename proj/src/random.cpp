#include "tvaudit/random.hpp"

#include <algorithm>
#include <cmath>

namespace tvaudit {

void validate_distribution(std::span<const double> dist) {
    if (dist.empty()) {
        throw InvalidDistribution("probability vector is empty");
    }
    double sum = 0.0;
    for (double p : dist) {
        if (!std::isfinite(p) || p < 0.0) {
            throw InvalidDistribution("probability vector has a negative or non-finite entry");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvalidDistribution("probability vector sums to " + std::to_string(sum) +
                                  ", not 1");
    }
}

CategoricalSampler::CategoricalSampler(std::span<const double> weights) {
    if (weights.empty()) {
        throw InvalidDistribution("weight vector is empty");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw InvalidDistribution("weight vector has a negative or non-finite entry");
        }
        sum += w;
    }
    if (sum <= 0.0) {
        throw InvalidDistribution("weight vector sums to zero");
    }
    cumulative_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i] / sum;
        cumulative_[i] = acc;
    }
    // Guard against rounding drift so every u in [0,1) lands in a bin.
    cumulative_.back() = 1.0;
}

std::size_t CategoricalSampler::draw(std::mt19937_64& gen) const {
    const double u = next_unit(gen);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<std::size_t>(it - cumulative_.begin());
}

std::vector<std::int64_t> CategoricalSampler::draw_counts(std::int64_t n_samples,
                                                          std::mt19937_64& gen) const {
    if (n_samples < 0) {
        throw InvalidParams("cannot draw a negative number of samples");
    }
    std::vector<std::int64_t> counts(cumulative_.size(), 0);
    for (std::int64_t i = 0; i < n_samples; ++i) {
        ++counts[draw(gen)];
    }
    return counts;
}

} // namespace tvaudit
