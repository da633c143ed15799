#include "tvaudit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tvaudit {

BiasReport diagnose_size_bias(std::span<const ScoreRecord> records,
                              std::span<const BasisTerm> basis,
                              std::span<const std::int64_t> probes,
                              const std::set<std::string>& exclude) {
    std::vector<FitPoint> points;
    points.reserve(records.size());
    for (const ScoreRecord& record : records) {
        if (exclude.contains(record.list_id)) {
            continue;
        }
        points.push_back({record.size_n, record.d_prime});
    }

    BiasReport report;
    report.model = fit_basis(points, basis);
    report.excluded.assign(exclude.begin(), exclude.end());
    for (std::size_t j = 0; j < report.model.basis.size(); ++j) {
        if (report.model.basis[j] == BasisTerm::N) {
            report.slope_like_summary = report.model.coefficients[j];
        }
    }
    for (std::int64_t probe : probes) {
        report.expected_score_at[probe] = eval_basis(report.model, probe);
    }
    return report;
}

DispersionReport dispersion_test(std::span<const Histogram> histograms, std::int64_t n_min,
                                 std::int64_t n_max, double window_width) {
    if (window_width < 0.0 || !std::isfinite(window_width)) {
        throw InvalidParams("window width must be finite and >= 0");
    }
    if (n_min > n_max) {
        throw InvalidParams("size window has n_min > n_max");
    }

    std::vector<const Histogram*> selected;
    for (const Histogram& h : histograms) {
        if (h.total() >= std::max<std::int64_t>(n_min, 1) && h.total() <= n_max) {
            selected.push_back(&h);
        }
    }
    if (selected.size() < 2) {
        throw TooFewInWindow("size window [" + std::to_string(n_min) + ", " +
                             std::to_string(n_max) + "] selects " +
                             std::to_string(selected.size()) + " lists; need at least 2");
    }

    std::vector<FitPoint> points;
    points.reserve(selected.size());
    for (const Histogram* h : selected) {
        points.push_back({h->total(), static_cast<double>(dtv(*h))});
    }
    ExpectedDtvFit fit;
    try {
        fit = fit_expected_dtv(points);
    } catch (const SingularSystem&) {
        throw TooFewInWindow("size window selects lists without two distinct sizes");
    }

    DispersionReport report;
    report.n_min = n_min;
    report.n_max = n_max;
    report.window_width = window_width;
    for (const Histogram* h : selected) {
        report.selected_ids.push_back(h->list_id());
        report.signed_scores.push_back(score_signed(*h, fit));
    }

    // A maximizing closed interval can always be slid right until its left
    // endpoint sits on a score, so anchoring at each score is exhaustive.
    std::vector<double> sorted_scores = report.signed_scores;
    std::sort(sorted_scores.begin(), sorted_scores.end());
    const std::size_t k = sorted_scores.size();
    std::size_t best_count = 0;
    double best_location = sorted_scores.front();
    for (std::size_t i = 0, j = 0; i < k; ++i) {
        if (j < i) {
            j = i;
        }
        while (j + 1 < k && sorted_scores[j + 1] <= sorted_scores[i] + window_width) {
            ++j;
        }
        const std::size_t count = j - i + 1;
        if (count > best_count) {
            best_count = count;
            best_location = sorted_scores[i];
        }
    }
    report.max_fraction_in_window = static_cast<double>(best_count) / static_cast<double>(k);
    report.best_window_location = best_location;
    return report;
}

namespace {

double rank_value(const ScoreRecord& record, RankKey key) {
    switch (key) {
    case RankKey::DPrime:
        return record.d_prime;
    case RankKey::DRen:
        if (!record.d_ren) {
            throw MissingKey("record '" + record.list_id + "' has no renormalized score");
        }
        return *record.d_ren;
    case RankKey::DDoublePrime:
        if (!record.d_doubleprime) {
            throw MissingKey("record '" + record.list_id + "' has no reference-based score");
        }
        return *record.d_doubleprime;
    }
    throw InvalidParams("unknown ranking key");
}

} // namespace

std::vector<ScoreRecord> rank_records(std::span<const ScoreRecord> records, RankKey key) {
    std::vector<ScoreRecord> ranked(records.begin(), records.end());
    // Validate up front so a missing key throws even when sort order would
    // never compare the offending record.
    for (const ScoreRecord& record : ranked) {
        rank_value(record, key);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [key](const ScoreRecord& lhs, const ScoreRecord& rhs) {
                         const double lv = rank_value(lhs, key);
                         const double rv = rank_value(rhs, key);
                         if (lv != rv) {
                             return lv > rv;
                         }
                         return lhs.list_id < rhs.list_id;
                     });
    return ranked;
}

} // namespace tvaudit
