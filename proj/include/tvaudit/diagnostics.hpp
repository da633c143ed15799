#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tvaudit/core.hpp"
#include "tvaudit/fitting.hpp"
#include "tvaudit/scoring.hpp"

namespace tvaudit {

/// Regression of outlier scores on histogram size. A positive N coefficient
/// means the scoring systematically favors larger lists.
struct BiasReport {
    BasisFit model;
    // Coefficient of the N term when present in the basis; 0 otherwise.
    double slope_like_summary = 0.0;
    // Model value at each requested probe size.
    std::map<std::int64_t, double> expected_score_at;
    std::vector<std::string> excluded;
};

/// Spread of signed scores across lists inside one size window. If the lists
/// shared a smoothness level, most scores would land in a narrow interval.
struct DispersionReport {
    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    std::vector<std::string> selected_ids;
    std::vector<double> signed_scores; // aligned with selected_ids
    double window_width = 0.0;
    double max_fraction_in_window = 0.0;
    // Left endpoint of a maximizing interval (smallest such score).
    double best_window_location = 0.0;
};

inline constexpr std::int64_t kDefaultBiasProbes[] = {1000, 10000, 100000, 1000000};

/// Fits the records' d_prime values against the basis and evaluates the
/// model at the probe sizes. Excluded ids are dropped before fitting.
BiasReport diagnose_size_bias(std::span<const ScoreRecord> records,
                              std::span<const BasisTerm> basis = kAffineBasis,
                              std::span<const std::int64_t> probes = kDefaultBiasProbes,
                              const std::set<std::string>& exclude = {});

/// Selects histograms with n_min <= N <= n_max, fits m(N) on exactly that
/// selection, computes the signed score of each selected list, and reports
/// the largest fraction of scores contained in any closed interval of length
/// window_width (it suffices to check intervals anchored at each score).
DispersionReport dispersion_test(std::span<const Histogram> histograms, std::int64_t n_min,
                                 std::int64_t n_max, double window_width);

/// Which score field a ranking should use.
enum class RankKey { DPrime, DRen, DDoublePrime };

/// Descending order by the requested key; ties broken by ascending list_id.
std::vector<ScoreRecord> rank_records(std::span<const ScoreRecord> records, RankKey key);

} // namespace tvaudit
