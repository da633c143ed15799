#include "tvaudit/core.hpp"

#include <cstdlib>
#include <numeric>
#include <utility>

namespace tvaudit {

BinDomain::BinDomain(int min_year, int max_year)
    : min_year_(min_year), max_year_(max_year) {
    if (min_year > max_year) {
        throw InvalidParams("bin domain min_year " + std::to_string(min_year) +
                            " exceeds max_year " + std::to_string(max_year));
    }
}

Histogram::Histogram(std::string list_id, BinDomain domain, std::vector<std::int64_t> counts)
    : list_id_(std::move(list_id)), domain_(domain), counts_(std::move(counts)), total_(0) {
    if (counts_.size() != domain_.bin_count()) {
        throw InvalidParams("histogram '" + list_id_ + "': " + std::to_string(counts_.size()) +
                            " counts for a domain with " + std::to_string(domain_.bin_count()) +
                            " bins");
    }
    for (std::int64_t c : counts_) {
        if (c < 0) {
            throw NegativeCount("histogram '" + list_id_ + "' has a negative bin count");
        }
        total_ += c;
    }
}

DtvValue dtv(std::span<const std::int64_t> counts) {
    DtvValue sum = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        sum += std::abs(counts[i] - counts[i - 1]);
    }
    return sum;
}

DtvValue dtv(const Histogram& h) {
    return dtv(h.counts());
}

Histogram from_year_counts(std::string list_id,
                           const std::map<long long, std::int64_t>& pairs,
                           const BinDomain& domain) {
    std::vector<std::int64_t> counts(domain.bin_count(), 0);
    for (const auto& [year, count] : pairs) {
        if (!domain.contains(year)) {
            throw OutOfDomainYear("list '" + list_id + "': year " + std::to_string(year) +
                                  " outside [" + std::to_string(domain.min_year()) + ", " +
                                  std::to_string(domain.max_year()) + "]");
        }
        if (count < 0) {
            throw NegativeCount("list '" + list_id + "': negative count for year " +
                                std::to_string(year));
        }
        counts[domain.index_of(year)] += count;
    }
    return Histogram{std::move(list_id), domain, std::move(counts)};
}

} // namespace tvaudit
