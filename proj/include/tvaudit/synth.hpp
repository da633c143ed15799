#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tvaudit/core.hpp"

namespace tvaudit {

/// Recipe for a synthetic histogram set: one histogram per entry of `sizes`,
/// drawn from base_distribution, except the indices in outlier_ids which are
/// drawn from outlier_distribution. Histogram i uses a generator seeded with
/// derive_seed(seed, i), so generation can be reordered or parallelized
/// without changing the output.
struct GeneratorSpec {
    BinDomain domain = BinDomain::default_domain();
    std::vector<double> base_distribution;
    std::vector<std::int64_t> sizes;
    std::optional<std::vector<double>> outlier_distribution;
    std::set<std::size_t> outlier_ids;
    std::uint64_t seed = 0;
    std::string id_prefix = "synth";

    bool operator==(const GeneratorSpec&) const = default;
};

enum class BaseKind { Uniform, DiscretizedBell, LinearRamp };

/// Parameters for smooth_base; only the fields for the chosen kind matter.
struct BaseParams {
    double center = 0.0;     // bell: mode, in years
    double width = 0.0;      // bell: standard deviation, in years
    double ramp_start = 0.0; // ramp: weight at min_year
    double ramp_stop = 1.0;  // ramp: weight at max_year
};

/// Normalized probability vector over the domain's bins.
std::vector<double> smooth_base(const BinDomain& domain, BaseKind kind, const BaseParams& params);

/// Alternating rough modulation of a base distribution:
/// p_i proportional to base_i * (1 + depth * (-1)^i), depth in [0, 1).
/// Raises the distribution's total variation without moving its bulk.
std::vector<double> comb_modulate(std::span<const double> base, double depth);

/// Multinomial draw of n_samples records from dist; deterministic per seed.
Histogram sample_histogram(std::string list_id, std::span<const double> dist,
                           std::int64_t n_samples, std::uint64_t seed, const BinDomain& domain);

/// One histogram per size in the spec; ids are "<prefix>-0000", "<prefix>-0001", ...
std::vector<Histogram> make_set(const GeneratorSpec& spec);

/// Age-at-death rounding experiment: victims of a single death year whose
/// ages are sampled from age_dist (ages 0..len-1); with probability
/// rounding_fraction an age is rounded to the nearest decade (ages ending
/// in 5 round up) before the birth year death_year - age is computed.
struct AgeRoundingParams {
    int death_year = 1942;
    std::vector<double> age_dist;
    double rounding_fraction = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    BinDomain domain = BinDomain::default_domain();
    std::string list_id = "age-rounding";
};

struct AgeRoundingResult {
    Histogram histogram;
    std::int64_t dropped = 0; // birth years that fell outside the domain
};

AgeRoundingResult age_rounding_simulation(const AgeRoundingParams& params);

/// Plain-text key/value form of a GeneratorSpec, as consumed by the synth
/// command. serialize emits exact `values:` distributions; parse also
/// accepts the kind-based shorthand (see README).
std::string serialize_generator_spec(const GeneratorSpec& spec);
GeneratorSpec parse_generator_spec(std::string_view text);

} // namespace tvaudit
