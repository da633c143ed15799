#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tvaudit/core.hpp"
#include "tvaudit/fitting.hpp"

namespace tvaudit {

/// Per-list outlier scores. d_prime = |dtv - expected_dtv| / sqrt(N);
/// d_signed keeps the sign of the deviation; d_ren and d_doubleprime are
/// filled by renormalize_scores and score_d_doubleprime respectively.
struct ScoreRecord {
    std::string list_id;
    std::int64_t size_n = 0;
    std::int64_t dtv = 0;
    double expected_dtv = 0.0;
    double d_prime = 0.0;
    double d_signed = 0.0;
    std::optional<double> d_ren;
    std::optional<double> d_doubleprime;
};

/// Monte-Carlo mean and standard deviation of DTVs of size-N multinomial
/// subsets of a reference histogram. Reproducible from (reference, N,
/// num_resamples, seed).
struct ReferenceStats {
    std::int64_t subset_size = 0;
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
    int num_resamples = 0;
    std::uint64_t seed = 0;
};

/// Result of scoring a whole histogram set against one shared fit.
struct DatasetScores {
    ExpectedDtvFit fit;
    std::vector<ScoreRecord> records;       // input order; N >= 1 only
    std::vector<std::string> skipped_empty; // list ids with N = 0
};

/// (dtv - m(N)) / sqrt(N) for a bare (dtv, N) pair.
double signed_score_value(std::int64_t dtv_value, std::int64_t size_n,
                          const ExpectedDtvFit& fit);

/// Signed outlier score of a histogram; throws EmptyHistogram when N = 0.
double score_signed(const Histogram& h, const ExpectedDtvFit& fit);

/// Absolute outlier score |dtv - m(N)| / sqrt(N).
double score_d_prime(const Histogram& h, const ExpectedDtvFit& fit);

/// Full score record for one histogram under a given fit.
ScoreRecord make_score_record(const Histogram& h, const ExpectedDtvFit& fit);

/// Fits m(N) on the non-excluded histograms with N >= 1, then scores every
/// histogram with N >= 1 against that fit (excluded ones included). Lists
/// with N = 0 are skipped and reported.
DatasetScores score_dataset(std::span<const Histogram> histograms,
                            const std::set<std::string>& exclude = {});

/// Draws num_resamples multinomial subsets of subset_size records from the
/// reference histogram (normalized to a probability vector) and returns the
/// sample mean and standard deviation (n-1 denominator) of their DTVs.
/// Resample r uses a generator seeded with derive_seed(seed, r).
ReferenceStats reference_stats(const Histogram& reference, std::int64_t subset_size,
                               int num_resamples, std::uint64_t seed);

/// |dtv - mu_hat| / sigma_hat against reference statistics of matching size.
double score_d_doubleprime(const Histogram& h, const ReferenceStats& ref);

/// Fills d_ren = d_prime / model(N) on every record; other fields unchanged.
/// The model must be positive at every record's size.
std::vector<ScoreRecord> renormalize_scores(std::vector<ScoreRecord> records,
                                            const BasisFit& model);

} // namespace tvaudit
