#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tvaudit/core.hpp"

namespace tvaudit {

/// Raw birth years for one list, before any domain filtering. Out-of-domain
/// values are expected here; that is what the filter is for.
struct RawRecordSet {
    std::string list_id;
    std::vector<long long> years;
    std::string source_note;
};

struct FilterResult {
    Histogram histogram;
    std::int64_t dropped = 0;
};

/// Bins the in-domain years (boundaries inclusive) and counts the rest.
FilterResult filter_year_range(const RawRecordSet& raw, const BinDomain& domain);

/// Same filter for pre-aggregated (year, count) pairs.
FilterResult filter_year_counts(std::string list_id,
                                std::span<const std::pair<long long, std::int64_t>> year_counts,
                                const BinDomain& domain);

/// Overlap mass between two count vectors: sum_i min(a_i, b_i) / max(N_a, N_b).
/// 1 iff the count vectors are identical, 0 iff their supports share no mass.
/// Two empty histograms compare as identical.
double list_similarity(const Histogram& a, const Histogram& b);

/// Fraction of sub's mass that fits bin-wise inside sup:
/// sum_i min(sub_i, sup_i) / N_sub. 1 iff sub is bin-wise dominated by sup.
double containment(const Histogram& sub, const Histogram& sup);

enum class PairVerdict { Duplicate, NearDuplicate, Contained, Distinct };

std::string_view to_string(PairVerdict verdict);

struct PairFinding {
    std::string id_a;
    std::string id_b;
    double similarity = 0.0;
    double containment_ab = 0.0; // a's mass inside b
    double containment_ba = 0.0;
    PairVerdict verdict = PairVerdict::Distinct;
};

/// Non-distinct pairs found in a histogram set, ordered lexicographically
/// by (id_a, id_b) with id_a < id_b within each pair.
struct DuplicationReport {
    std::vector<PairFinding> pairs;
};

struct DedupeOptions {
    double sim_threshold = 0.999;
    double cont_threshold = 0.999;
    // With containment off, pairs whose sizes differ by more than 100x are
    // skipped outright; their similarity cannot reach any sane threshold.
    bool check_containment = true;
};

/// Evaluates all unordered pairs. Verdicts: exact count-vector equality is
/// duplicate; similarity >= sim_threshold is near_duplicate; otherwise
/// either containment >= cont_threshold is contained; else distinct.
DuplicationReport find_duplicates(std::span<const Histogram> histograms,
                                  const DedupeOptions& options = {});

/// Terminal-digit composition of a list's birth years.
struct DigitProfile {
    std::string list_id;
    std::int64_t size_n = 0;
    std::array<std::int64_t, 10> digit_counts{};
    // index_d = 10 * count_d / N; 1.0 for every digit under uniform digits.
    std::array<double, 10> digit_indices{};
    // Aggregate index over terminal digits 4-8: 2 * count_{4..8} / N.
    double mid_decade_index = 0.0;
    // Against the uniform-digit baseline: sum_d (count_d - N/10)^2 / (N/10).
    double chi_square = 0.0;
    std::vector<int> flagged_digits;
};

/// Terminal-digit counts of birth years weighted by bin counts. Digits with
/// index >= flag_threshold are flagged.
DigitProfile digit_profile(const Histogram& h, double flag_threshold = 1.25);

/// One list parsed from a file: either one birth year per line, or
/// delimiter-separated (year, count) lines. Layout is auto-detected.
struct RawList {
    std::string list_id;
    std::vector<std::pair<long long, std::int64_t>> year_counts;
};

/// Parses list text in either layout. `source` names the input in errors.
RawList parse_list_text(std::string_view text, std::string list_id, std::string_view source);

/// Reads a list file; the file stem is the list id unless overridden.
RawList read_list_file(const std::filesystem::path& path, std::string_view id_override = {});

/// filename -> list_id mapping, one delimiter-separated pair per line.
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path);

/// Writes `year,count` lines in ascending year order, omitting empty bins.
/// Re-ingesting the file reproduces the histogram's count vector exactly.
void write_counts_file(const Histogram& h, const std::filesystem::path& path);

} // namespace tvaudit
