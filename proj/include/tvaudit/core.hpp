#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tvaudit/errors.hpp"

namespace tvaudit {

/// Inclusive integer year range defining the histogram bins.
class BinDomain {
public:
    BinDomain(int min_year, int max_year);

    // The 96-bin year range [1850, 1945] used throughout the reports.
    static BinDomain default_domain() { return BinDomain{1850, 1945}; }

    int min_year() const { return min_year_; }
    int max_year() const { return max_year_; }
    std::size_t bin_count() const {
        return static_cast<std::size_t>(max_year_ - min_year_) + 1;
    }
    bool contains(long long year) const {
        return year >= min_year_ && year <= max_year_;
    }
    // pre: contains(year)
    std::size_t index_of(long long year) const {
        return static_cast<std::size_t>(year - min_year_);
    }
    int year_at(std::size_t index) const {
        return min_year_ + static_cast<int>(index);
    }

    bool operator==(const BinDomain&) const = default;

private:
    int min_year_;
    int max_year_;
};

/// Discrete total variation of a histogram: an exact nonnegative integer.
using DtvValue = std::int64_t;

/// Binned year-of-birth counts for one list; the unit of analysis.
///
/// Immutable after construction. counts()[i] is the number of records born
/// in year domain().min_year() + i; total() is the record count N.
class Histogram {
public:
    Histogram(std::string list_id, BinDomain domain, std::vector<std::int64_t> counts);

    const std::string& list_id() const { return list_id_; }
    const BinDomain& domain() const { return domain_; }
    std::span<const std::int64_t> counts() const { return counts_; }
    std::int64_t total() const { return total_; }

private:
    std::string list_id_;
    BinDomain domain_;
    std::vector<std::int64_t> counts_;
    std::int64_t total_;
};

/// Sum of absolute differences between adjacent bin counts. Exact integer
/// arithmetic; 0 for histograms with a single bin.
DtvValue dtv(std::span<const std::int64_t> counts);
DtvValue dtv(const Histogram& h);

/// Builds a histogram from sparse year->count pairs, zero-filling unmentioned
/// bins. Years must already lie inside the domain (filter first if not).
Histogram from_year_counts(std::string list_id,
                           const std::map<long long, std::int64_t>& pairs,
                           const BinDomain& domain);

} // namespace tvaudit
