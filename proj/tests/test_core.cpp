#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "tvaudit/core.hpp"
#include "tvaudit/errors.hpp"

#include "oracles.hpp"

using namespace tvaudit;

namespace {

std::vector<std::int64_t> random_counts(std::mt19937_64& gen, std::size_t max_bins,
                                        std::int64_t max_count) {
    const std::size_t n = 1 + gen() % max_bins;
    std::vector<std::int64_t> counts(n);
    for (auto& c : counts)
        c = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(max_count + 1));
    return counts;
}

} // namespace

TEST_CASE("default domain spans 1850..1945 in 96 bins") {
    const BinDomain d = BinDomain::default_domain();
    CHECK(d.min_year() == 1850);
    CHECK(d.max_year() == 1945);
    CHECK(d.bin_count() == 96);
}

TEST_CASE("domain maps years to bin indices and back") {
    const BinDomain d(1900, 1910);
    CHECK(d.bin_count() == 11);
    CHECK(d.contains(1900));
    CHECK(d.contains(1910));
    CHECK_FALSE(d.contains(1899));
    CHECK_FALSE(d.contains(1911));
    for (std::size_t i = 0; i < d.bin_count(); ++i)
        CHECK(d.index_of(d.year_at(i)) == i);
    CHECK(d.index_of(1900) == 0);
    CHECK(d.year_at(10) == 1910);
}

TEST_CASE("a single-year domain is valid and reversed bounds are not") {
    CHECK(BinDomain(1942, 1942).bin_count() == 1);
    CHECK_THROWS_AS(BinDomain(1943, 1942), InvalidParams);
}

TEST_CASE("dtv of a single bin is zero") {
    CHECK(dtv(std::vector<std::int64_t>{7}) == 0);
}

TEST_CASE("dtv of a constant histogram is zero") {
    CHECK(dtv(std::vector<std::int64_t>{4, 4, 4, 4}) == 0);
}

TEST_CASE("dtv sums absolute adjacent differences") {
    CHECK(dtv(std::vector<std::int64_t>{1, 3, 2}) == 3);
}

TEST_CASE("dtv equals the loop oracle on 1000 random count vectors") {
    std::mt19937_64 gen(20240811);
    for (int round = 0; round < 1000; ++round) {
        const auto counts = random_counts(gen, 50, 100);
        CHECK(dtv(counts) == oracle::dtv_loop(counts));
    }
}

TEST_CASE("dtv is invariant under reversal") {
    std::mt19937_64 gen(7);
    for (int round = 0; round < 200; ++round) {
        auto counts = random_counts(gen, 40, 50);
        const DtvValue forward = dtv(counts);
        std::reverse(counts.begin(), counts.end());
        CHECK(dtv(counts) == forward);
    }
}

TEST_CASE("dtv is zero exactly on constant count vectors") {
    std::mt19937_64 gen(11);
    for (int round = 0; round < 200; ++round) {
        const auto counts = random_counts(gen, 30, 20);
        const bool constant = std::all_of(counts.begin(), counts.end(),
                                          [&](std::int64_t c) { return c == counts.front(); });
        CHECK((dtv(counts) == 0) == constant);
    }
}

TEST_CASE("dtv is subadditive under elementwise sum") {
    std::mt19937_64 gen(13);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 1 + gen() % 30;
        std::vector<std::int64_t> g(n), h(n), sum(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = static_cast<std::int64_t>(gen() % 100);
            h[i] = static_cast<std::int64_t>(gen() % 100);
            sum[i] = g[i] + h[i];
        }
        CHECK(dtv(sum) <= dtv(g) + dtv(h));
    }
}

TEST_CASE("dtv never exceeds twice the total mass") {
    std::mt19937_64 gen(17);
    for (int round = 0; round < 200; ++round) {
        const auto counts = random_counts(gen, 60, 200);
        std::int64_t total = 0;
        for (std::int64_t c : counts)
            total += c;
        CHECK(dtv(counts) <= 2 * total);
    }
}

TEST_CASE("histogram validates the counts length") {
    const BinDomain d(1900, 1902);
    CHECK_THROWS_AS(Histogram("x", d, {1, 2}), InvalidParams);
    CHECK_THROWS_AS(Histogram("x", d, {1, 2, 3, 4}), InvalidParams);
}

TEST_CASE("histogram rejects negative counts") {
    const BinDomain d(1900, 1902);
    CHECK_THROWS_AS(Histogram("x", d, {1, -2, 3}), NegativeCount);
}

TEST_CASE("histogram total is the exact count sum") {
    const BinDomain d(1900, 1903);
    const Histogram h("x", d, {5, 0, 7, 2});
    CHECK(h.total() == 14);
    CHECK(h.list_id() == "x");
    CHECK(h.domain() == d);
    CHECK(dtv(h) == 5 + 7 + 5);
}

TEST_CASE("sparse year counts fill a full histogram with boundary years kept") {
    const BinDomain d = BinDomain::default_domain();
    const Histogram h = from_year_counts("x", {{1850, 1}, {1945, 2}}, d);
    CHECK(h.total() == 3);
    CHECK(h.counts()[0] == 1);
    CHECK(h.counts()[95] == 2);
    for (std::size_t i = 1; i < 95; ++i)
        CHECK(h.counts()[i] == 0);
}

TEST_CASE("sparse year counts reject out-of-domain years") {
    const BinDomain d = BinDomain::default_domain();
    CHECK_THROWS_AS(from_year_counts("x", {{1771, 1}}, d), OutOfDomainYear);
    CHECK_THROWS_AS(from_year_counts("x", {{1946, 1}}, d), OutOfDomainYear);
}

TEST_CASE("sparse year counts reject negative counts") {
    const BinDomain d = BinDomain::default_domain();
    CHECK_THROWS_AS(from_year_counts("x", {{1900, -1}}, d), NegativeCount);
}

TEST_CASE("an empty year mapping gives the all-zero histogram") {
    const Histogram h = from_year_counts("x", {}, BinDomain::default_domain());
    CHECK(h.total() == 0);
    CHECK(dtv(h) == 0);
}
