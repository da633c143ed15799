#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tvaudit/core.hpp"
#include "tvaudit/errors.hpp"
#include "tvaudit/hygiene.hpp"
#include "tvaudit/random.hpp"
#include "tvaudit/synth.hpp"

using namespace tvaudit;

namespace {

double prob_sum(const std::vector<double>& p) {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

// Total variation of a probability vector, the continuous analogue of the
// histogram statistic.
double prob_tv(const std::vector<double>& p) {
    double tv = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        tv += std::abs(p[i] - p[i - 1]);
    }
    return tv;
}

bool same_counts(const Histogram& a, const Histogram& b) {
    const auto ca = a.counts();
    const auto cb = b.counts();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

} // namespace

TEST_CASE("the uniform base puts equal mass on every bin") {
    const BinDomain domain(1850, 1945);
    const auto base = smooth_base(domain, BaseKind::Uniform, {});
    REQUIRE(base.size() == 96);
    for (double p : base) {
        CHECK(p == 1.0 / 96.0);
    }
}

TEST_CASE("the bell base is symmetric about its center and unimodal") {
    const BinDomain domain(1850, 1945);
    BaseParams params;
    params.center = 1897.5; // midway between the two central bins
    params.width = 12.0;
    const auto base = smooth_base(domain, BaseKind::DiscretizedBell, params);
    REQUIRE(base.size() == 96);
    CHECK(prob_sum(base) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 48; ++i) {
        CHECK(base[i] == base[95 - i]);
    }
    for (std::size_t i = 1; i < 48; ++i) {
        CHECK(base[i] >= base[i - 1]);
    }
    for (std::size_t i = 49; i < 96; ++i) {
        CHECK(base[i] <= base[i - 1]);
    }
}

TEST_CASE("the ramp base grows linearly from start to stop weight") {
    const BinDomain domain(1900, 1909);
    BaseParams params;
    params.ramp_start = 0.0;
    params.ramp_stop = 1.0;
    const auto base = smooth_base(domain, BaseKind::LinearRamp, params);
    REQUIRE(base.size() == 10);
    CHECK(base[0] == 0.0);
    CHECK(std::is_sorted(base.begin(), base.end()));
    CHECK(prob_sum(base) == doctest::Approx(1.0).epsilon(1e-12));
    // equally spaced increments
    for (std::size_t i = 2; i < base.size(); ++i) {
        CHECK(base[i] - base[i - 1] ==
              doctest::Approx(base[1] - base[0]).epsilon(1e-12));
    }
}

TEST_CASE("base distributions validate their shape parameters") {
    const BinDomain domain(1900, 1909);
    BaseParams bad_bell;
    bad_bell.center = 1900.0;
    bad_bell.width = 0.0;
    CHECK_THROWS_AS(smooth_base(domain, BaseKind::DiscretizedBell, bad_bell), InvalidParams);
    BaseParams bad_ramp;
    bad_ramp.ramp_start = -1.0;
    CHECK_THROWS_AS(smooth_base(domain, BaseKind::LinearRamp, bad_ramp), InvalidParams);
    BaseParams flat_zero;
    flat_zero.ramp_start = 0.0;
    flat_zero.ramp_stop = 0.0;
    CHECK_THROWS_AS(smooth_base(domain, BaseKind::LinearRamp, flat_zero), InvalidParams);
}

TEST_CASE("comb modulation roughens a distribution without unnormalizing it") {
    const BinDomain domain(1850, 1945);
    BaseParams params;
    params.center = 1900.0;
    params.width = 15.0;
    const auto base = smooth_base(domain, BaseKind::DiscretizedBell, params);
    const auto comb = comb_modulate(base, 0.3);
    REQUIRE(comb.size() == base.size());
    CHECK(prob_sum(comb) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prob_tv(comb) > prob_tv(base));
    // depth zero leaves the distribution alone
    const auto same = comb_modulate(base, 0.0);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(same[i] == doctest::Approx(base[i]).epsilon(1e-15));
    }
}

TEST_CASE("comb modulation rejects out-of-range depths") {
    const std::vector<double> base{0.5, 0.5};
    CHECK_THROWS_AS(comb_modulate(base, -0.1), InvalidParams);
    CHECK_THROWS_AS(comb_modulate(base, 1.0), InvalidParams);
    CHECK_THROWS_AS(comb_modulate(std::vector<double>{}, 0.5), InvalidParams);
}

TEST_CASE("sampling a point mass fills a single bin") {
    const BinDomain domain(1850, 1945);
    std::vector<double> dist(96, 0.0);
    dist[40] = 1.0;
    const Histogram h = sample_histogram("pm", dist, 1234, 99, domain);
    CHECK(h.total() == 1234);
    CHECK(h.counts()[40] == 1234);
    CHECK(dtv(h) == 2468);
}

TEST_CASE("sampling zero records yields an empty histogram") {
    const BinDomain domain(1900, 1903);
    const std::vector<double> dist{0.25, 0.25, 0.25, 0.25};
    const Histogram h = sample_histogram("none", dist, 0, 1, domain);
    CHECK(h.total() == 0);
}

TEST_CASE("sampled histograms conserve the requested mass exactly") {
    const BinDomain domain(1850, 1945);
    BaseParams params;
    params.center = 1905.0;
    params.width = 20.0;
    const auto dist = smooth_base(domain, BaseKind::DiscretizedBell, params);
    for (std::int64_t n : {1, 17, 1000, 100000}) {
        const Histogram h = sample_histogram("m", dist, n, 7, domain);
        CHECK(h.total() == n);
    }
}

TEST_CASE("uniform sampling stays within binomial fluctuation bands") {
    const BinDomain domain(1900, 1903);
    const std::vector<double> dist{0.25, 0.25, 0.25, 0.25};
    const Histogram h = sample_histogram("u", dist, 100000, 2024, domain);
    // per-bin sd = sqrt(1e5 * 0.25 * 0.75) ~ 137
    for (std::int64_t c : h.counts()) {
        CHECK(std::abs(c - 25000) <= 685);
    }
}

TEST_CASE("sampling is deterministic per seed and distinct across seeds") {
    const BinDomain domain(1850, 1945);
    const auto dist = smooth_base(domain, BaseKind::Uniform, {});
    const Histogram a = sample_histogram("a", dist, 5000, 31337, domain);
    const Histogram b = sample_histogram("b", dist, 5000, 31337, domain);
    const Histogram c = sample_histogram("c", dist, 5000, 31338, domain);
    CHECK(same_counts(a, b));
    CHECK_FALSE(same_counts(a, c));
}

TEST_CASE("sampling validates distribution length and sample count") {
    const BinDomain domain(1900, 1903);
    const std::vector<double> wrong{0.5, 0.5};
    CHECK_THROWS_AS(sample_histogram("x", wrong, 10, 1, domain), SizeMismatch);
    const std::vector<double> dist{0.25, 0.25, 0.25, 0.25};
    CHECK_THROWS_AS(sample_histogram("x", dist, -1, 1, domain), InvalidParams);
    const std::vector<double> negative{0.5, -0.5, 0.5, 0.5};
    CHECK_THROWS_AS(sample_histogram("x", negative, 10, 1, domain), InvalidDistribution);
}

TEST_CASE("a generated set reproduces per-index independent draws") {
    GeneratorSpec spec;
    spec.domain = BinDomain(1850, 1945);
    spec.base_distribution = smooth_base(spec.domain, BaseKind::Uniform, {});
    BaseParams bell;
    bell.center = 1910.0;
    bell.width = 9.0;
    spec.outlier_distribution = smooth_base(spec.domain, BaseKind::DiscretizedBell, bell);
    spec.outlier_ids = {2};
    spec.sizes = {100, 200, 300, 400};
    spec.seed = 5150;
    spec.id_prefix = "corp";

    const std::vector<Histogram> set = make_set(spec);
    REQUIRE(set.size() == 4);
    CHECK(set[0].list_id() == "corp-0000");
    CHECK(set[3].list_id() == "corp-0003");
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& dist =
            i == 2 ? *spec.outlier_distribution : spec.base_distribution;
        const Histogram direct = sample_histogram(set[i].list_id(), dist, spec.sizes[i],
                                                  derive_seed(spec.seed, i), spec.domain);
        CHECK(same_counts(set[i], direct));
        CHECK(set[i].total() == spec.sizes[i]);
    }
}

TEST_CASE("an outlier drawn from the base distribution is unremarkable") {
    // two-sample location check: with outlier == base, the designated list's
    // mean birth year matches a plain list's within joint sampling error
    GeneratorSpec spec;
    spec.domain = BinDomain(1850, 1945);
    BaseParams bell;
    bell.center = 1900.0;
    bell.width = 14.0;
    spec.base_distribution = smooth_base(spec.domain, BaseKind::DiscretizedBell, bell);
    spec.outlier_distribution = spec.base_distribution;
    spec.outlier_ids = {1};
    spec.sizes = {100000, 100000};
    spec.seed = 808;

    const std::vector<Histogram> set = make_set(spec);
    auto mean_year = [](const Histogram& h) {
        double sum = 0.0;
        const auto counts = h.counts();
        for (std::size_t i = 0; i < counts.size(); ++i) {
            sum += static_cast<double>(counts[i]) *
                   static_cast<double>(h.domain().year_at(i));
        }
        return sum / static_cast<double>(h.total());
    };
    // sd of each mean ~ 14 / sqrt(1e5) ~ 0.044; allow 5 sd on the difference
    CHECK(std::abs(mean_year(set[0]) - mean_year(set[1])) <= 5.0 * 0.0443 * std::sqrt(2.0));
}

TEST_CASE("generator specs validate outlier wiring") {
    GeneratorSpec spec;
    spec.base_distribution = smooth_base(spec.domain, BaseKind::Uniform, {});
    spec.sizes = {10, 20};
    spec.outlier_ids = {0};
    CHECK_THROWS_AS(make_set(spec), InvalidParams); // ids without a distribution
    spec.outlier_distribution = spec.base_distribution;
    spec.outlier_ids = {2};
    CHECK_THROWS_AS(make_set(spec), InvalidParams); // id beyond the last size
}

TEST_CASE("full age rounding moves every birth year onto a decade boundary") {
    AgeRoundingParams params;
    params.death_year = 1942;
    params.age_dist.assign(91, 0.0);
    for (int age = 20; age <= 90; ++age) {
        params.age_dist[static_cast<std::size_t>(age)] = 1.0;
    }
    params.rounding_fraction = 1.0;
    params.n_samples = 100000;
    params.seed = 17;
    const AgeRoundingResult result = age_rounding_simulation(params);
    CHECK(result.dropped == 0);
    CHECK(result.histogram.total() == 100000);
    // death year ends in 2, rounded ages end in 0, so births all end in 2
    const DigitProfile profile = digit_profile(result.histogram);
    CHECK(profile.digit_indices[2] == 10.0);
    CHECK(profile.flagged_digits == std::vector<int>{2});
}

TEST_CASE("the rounding rule sends ages ending in five upward") {
    AgeRoundingParams params;
    params.death_year = 1942;
    params.rounding_fraction = 1.0;
    params.n_samples = 50;
    params.seed = 3;

    params.age_dist.assign(16, 0.0);
    params.age_dist[15] = 1.0; // age 15 rounds to 20 -> birth 1922
    const AgeRoundingResult up = age_rounding_simulation(params);
    CHECK(up.histogram.counts()[up.histogram.domain().index_of(1922)] == 50);

    params.age_dist.assign(15, 0.0);
    params.age_dist[14] = 1.0; // age 14 rounds to 10 -> birth 1932
    const AgeRoundingResult down = age_rounding_simulation(params);
    CHECK(down.histogram.counts()[down.histogram.domain().index_of(1932)] == 50);
}

TEST_CASE("without rounding, terminal digits stay near uniform") {
    AgeRoundingParams params;
    params.death_year = 1942;
    params.age_dist.assign(90, 1.0); // ages 0..89 -> births 1853..1942, all in domain
    params.rounding_fraction = 0.0;
    params.n_samples = 100000;
    params.seed = 21;
    const AgeRoundingResult result = age_rounding_simulation(params);
    CHECK(result.dropped == 0);
    const DigitProfile profile = digit_profile(result.histogram);
    CHECK(profile.flagged_digits.empty());
}

TEST_CASE("out-of-domain births are counted, never binned") {
    AgeRoundingParams params;
    params.death_year = 1942;
    params.age_dist.assign(100, 1.0); // ages up to 99 -> births down to 1843
    params.rounding_fraction = 0.0;
    params.n_samples = 20000;
    params.seed = 5;
    const AgeRoundingResult result = age_rounding_simulation(params);
    CHECK(result.dropped > 0);
    CHECK(result.histogram.total() + result.dropped == params.n_samples);
}

TEST_CASE("age rounding simulations are reproducible") {
    AgeRoundingParams params;
    params.age_dist.assign(80, 1.0);
    params.rounding_fraction = 0.3;
    params.n_samples = 10000;
    params.seed = 99;
    const AgeRoundingResult a = age_rounding_simulation(params);
    const AgeRoundingResult b = age_rounding_simulation(params);
    CHECK(same_counts(a.histogram, b.histogram));
    CHECK(a.dropped == b.dropped);
    params.seed = 100;
    const AgeRoundingResult c = age_rounding_simulation(params);
    CHECK_FALSE(same_counts(a.histogram, c.histogram));
}

TEST_CASE("age rounding validates its parameters") {
    AgeRoundingParams params;
    params.age_dist.assign(10, 1.0);
    params.n_samples = 10;
    params.rounding_fraction = -0.1;
    CHECK_THROWS_AS(age_rounding_simulation(params), InvalidParams);
    params.rounding_fraction = 1.1;
    CHECK_THROWS_AS(age_rounding_simulation(params), InvalidParams);
    params.rounding_fraction = 0.5;
    params.n_samples = -1;
    CHECK_THROWS_AS(age_rounding_simulation(params), InvalidParams);
    params.n_samples = 10;
    params.age_dist[3] = -1.0;
    CHECK_THROWS_AS(age_rounding_simulation(params), InvalidDistribution);
}

TEST_CASE("generator specs survive a serialize/parse round trip") {
    GeneratorSpec spec;
    spec.domain = BinDomain(1850, 1945);
    BaseParams bell;
    bell.center = 1902.25;
    bell.width = 13.5;
    spec.base_distribution = smooth_base(spec.domain, BaseKind::DiscretizedBell, bell);
    spec.outlier_distribution = comb_modulate(spec.base_distribution, 0.35);
    spec.outlier_ids = {1, 3};
    spec.sizes = {100, 1000, 10000, 100000};
    spec.seed = 777;
    spec.id_prefix = "corp";

    const GeneratorSpec back = parse_generator_spec(serialize_generator_spec(spec));
    CHECK(back == spec);
}

TEST_CASE("spec files accept the shorthand distribution kinds") {
    const GeneratorSpec spec = parse_generator_spec("# synthetic corpus\n"
                                                    "domain = 1850:1945\n"
                                                    "seed = 11\n"
                                                    "sizes = 10,20,30\n"
                                                    "base = bell\n"
                                                    "base_center = 1900\n"
                                                    "base_width = 12 # years\n"
                                                    "outlier = bell\n"
                                                    "outlier_center = 1900\n"
                                                    "outlier_width = 12\n"
                                                    "outlier_comb_depth = 0.4\n"
                                                    "outlier_ids = 1\n");
    BaseParams bell;
    bell.center = 1900.0;
    bell.width = 12.0;
    const auto base = smooth_base(BinDomain(1850, 1945), BaseKind::DiscretizedBell, bell);
    CHECK(spec.base_distribution == base);
    REQUIRE(spec.outlier_distribution.has_value());
    CHECK(*spec.outlier_distribution == comb_modulate(base, 0.4));
    CHECK(spec.outlier_ids == std::set<std::size_t>{1});
    CHECK(spec.seed == 11);

    const GeneratorSpec ramp = parse_generator_spec("sizes = 5\n"
                                                    "base = ramp\n"
                                                    "base_ramp_start = 1\n"
                                                    "base_ramp_stop = 3\n");
    CHECK(ramp.base_distribution ==
          smooth_base(BinDomain::default_domain(), BaseKind::LinearRamp, {0, 0, 1.0, 3.0}));
}

TEST_CASE("logarithmic size grids hit round numbers at the endpoints") {
    const GeneratorSpec spec = parse_generator_spec("sizes = logspace:1000:100000:3\n"
                                                    "base = uniform\n");
    const std::vector<std::int64_t> expected{1000, 10000, 100000};
    CHECK(spec.sizes == expected);
}

TEST_CASE("malformed spec files name the offending line") {
    auto msg = [](const char* text) {
        try {
            parse_generator_spec(text);
        } catch (const IngestError& e) {
            return std::string(e.what());
        }
        return std::string{};
    };
    CHECK(msg("base = uniform\n").find("sizes") != std::string::npos);
    CHECK(msg("sizes = 10\n").find("base") != std::string::npos);
    CHECK(msg("sizes = 10\nbase = uniform\nwhatever = 1\n").find("line 3") !=
          std::string::npos);
    CHECK(msg("domain = 1850\nsizes = 10\nbase = uniform\n").find("MIN:MAX") !=
          std::string::npos);
    CHECK(msg("sizes = 10\nbase = custom\n").find("base_values") != std::string::npos);
    CHECK(msg("sizes = 10\nbase = wiggly\n").find("wiggly") != std::string::npos);
    CHECK(msg("sizes = logspace:0:10:3\nbase = uniform\n").find("logspace") !=
          std::string::npos);
    CHECK(msg("sizes = ten\nbase = uniform\n").find("integer") != std::string::npos);
    CHECK(msg("seed\nsizes = 10\nbase = uniform\n").find("key = value") !=
          std::string::npos);
    CHECK_THROWS_AS(parse_generator_spec("sizes = 10\nbase = uniform\noutlier_ids = -1\n"),
                    IngestError);
}
