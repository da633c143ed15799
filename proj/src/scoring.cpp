#include "tvaudit/scoring.hpp"

#include <cmath>
#include <string>

#include "tvaudit/random.hpp"

namespace tvaudit {

double signed_score_value(std::int64_t dtv_value, std::int64_t size_n,
                          const ExpectedDtvFit& fit) {
    if (size_n < 1) {
        throw EmptyHistogram("cannot score a histogram with N = " + std::to_string(size_n));
    }
    const double expected = eval_expected_dtv(fit, size_n);
    return (static_cast<double>(dtv_value) - expected) / std::sqrt(static_cast<double>(size_n));
}

double score_signed(const Histogram& h, const ExpectedDtvFit& fit) {
    if (h.total() == 0) {
        throw EmptyHistogram("list '" + h.list_id() + "' has no records");
    }
    return signed_score_value(dtv(h), h.total(), fit);
}

double score_d_prime(const Histogram& h, const ExpectedDtvFit& fit) {
    return std::abs(score_signed(h, fit));
}

ScoreRecord make_score_record(const Histogram& h, const ExpectedDtvFit& fit) {
    if (h.total() == 0) {
        throw EmptyHistogram("list '" + h.list_id() + "' has no records");
    }
    ScoreRecord record;
    record.list_id = h.list_id();
    record.size_n = h.total();
    record.dtv = dtv(h);
    record.expected_dtv = eval_expected_dtv(fit, record.size_n);
    record.d_signed = signed_score_value(record.dtv, record.size_n, fit);
    record.d_prime = std::abs(record.d_signed);
    return record;
}

DatasetScores score_dataset(std::span<const Histogram> histograms,
                            const std::set<std::string>& exclude) {
    DatasetScores result;
    std::vector<FitPoint> points;
    points.reserve(histograms.size());
    for (const Histogram& h : histograms) {
        if (h.total() == 0) {
            result.skipped_empty.push_back(h.list_id());
            continue;
        }
        if (exclude.contains(h.list_id())) {
            continue;
        }
        points.push_back({h.total(), static_cast<double>(dtv(h))});
    }
    result.fit = fit_expected_dtv(points);
    for (const Histogram& h : histograms) {
        if (h.total() == 0) {
            continue;
        }
        result.records.push_back(make_score_record(h, result.fit));
    }
    return result;
}

ReferenceStats reference_stats(const Histogram& reference, std::int64_t subset_size,
                               int num_resamples, std::uint64_t seed) {
    if (reference.total() == 0) {
        throw EmptyReference("reference list '" + reference.list_id() + "' has no records");
    }
    if (subset_size < 1) {
        throw InvalidParams("subset size must be >= 1, got " + std::to_string(subset_size));
    }
    if (num_resamples < 2) {
        throw InvalidParams("need at least 2 resamples for a standard deviation, got " +
                            std::to_string(num_resamples));
    }

    std::vector<double> weights(reference.counts().begin(), reference.counts().end());
    const CategoricalSampler sampler(weights);

    std::vector<double> values(static_cast<std::size_t>(num_resamples));
    for (int r = 0; r < num_resamples; ++r) {
        std::mt19937_64 gen(derive_seed(seed, static_cast<std::uint64_t>(r)));
        const std::vector<std::int64_t> counts = sampler.draw_counts(subset_size, gen);
        values[static_cast<std::size_t>(r)] = static_cast<double>(dtv(counts));
    }

    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / num_resamples;
    double centered = 0.0;
    for (double v : values) {
        centered += (v - mean) * (v - mean);
    }

    ReferenceStats stats;
    stats.subset_size = subset_size;
    stats.num_resamples = num_resamples;
    stats.seed = seed;
    stats.mu_hat = mean;
    stats.sigma_hat = std::sqrt(centered / (num_resamples - 1));
    return stats;
}

double score_d_doubleprime(const Histogram& h, const ReferenceStats& ref) {
    if (h.total() != ref.subset_size) {
        throw SizeMismatch("list '" + h.list_id() + "' has N = " + std::to_string(h.total()) +
                           " but the reference statistics are for N = " +
                           std::to_string(ref.subset_size));
    }
    if (!(ref.sigma_hat > 0.0)) {
        throw ZeroSigma("reference DTV standard deviation is zero");
    }
    return std::abs(static_cast<double>(dtv(h)) - ref.mu_hat) / ref.sigma_hat;
}

std::vector<ScoreRecord> renormalize_scores(std::vector<ScoreRecord> records,
                                            const BasisFit& model) {
    for (ScoreRecord& record : records) {
        const double expected_score = eval_basis(model, record.size_n);
        if (!(expected_score > 0.0)) {
            throw NonpositiveExpectedScore("renormalization model is " +
                                           std::to_string(expected_score) + " at N = " +
                                           std::to_string(record.size_n) + " (list '" +
                                           record.list_id + "')");
        }
        record.d_ren = record.d_prime / expected_score;
    }
    return records;
}

} // namespace tvaudit
