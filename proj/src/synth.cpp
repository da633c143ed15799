#include "tvaudit/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "tvaudit/errors.hpp"
#include "tvaudit/random.hpp"

namespace tvaudit {

namespace {

std::vector<double> normalized(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw InvalidParams("distribution weights must be finite and nonnegative");
        total += w;
    }
    if (total <= 0.0)
        throw InvalidParams("distribution weights must have a positive sum");
    for (double& w : weights)
        w /= total;
    return weights;
}

} // namespace

std::vector<double> smooth_base(const BinDomain& domain, BaseKind kind, const BaseParams& params) {
    const std::size_t n = domain.bin_count();
    std::vector<double> weights(n, 0.0);
    switch (kind) {
    case BaseKind::Uniform:
        std::fill(weights.begin(), weights.end(), 1.0);
        break;
    case BaseKind::DiscretizedBell: {
        if (!(params.width > 0.0) || !std::isfinite(params.width))
            throw InvalidParams("bell width must be positive");
        if (!std::isfinite(params.center))
            throw InvalidParams("bell center must be finite");
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (static_cast<double>(domain.year_at(i)) - params.center) / params.width;
            weights[i] = std::exp(-0.5 * z * z);
        }
        break;
    }
    case BaseKind::LinearRamp: {
        if (!std::isfinite(params.ramp_start) || !std::isfinite(params.ramp_stop) ||
            params.ramp_start < 0.0 || params.ramp_stop < 0.0)
            throw InvalidParams("ramp endpoints must be finite and nonnegative");
        for (std::size_t i = 0; i < n; ++i) {
            const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
            weights[i] = params.ramp_start + t * (params.ramp_stop - params.ramp_start);
        }
        break;
    }
    }
    return normalized(std::move(weights));
}

std::vector<double> comb_modulate(std::span<const double> base, double depth) {
    if (!std::isfinite(depth) || depth < 0.0 || depth >= 1.0)
        throw InvalidParams("comb depth must lie in [0, 1)");
    if (base.empty())
        throw InvalidParams("comb modulation needs a nonempty base");
    std::vector<double> weights(base.begin(), base.end());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        weights[i] *= 1.0 + sign * depth;
    }
    return normalized(std::move(weights));
}

Histogram sample_histogram(std::string list_id, std::span<const double> dist,
                           std::int64_t n_samples, std::uint64_t seed, const BinDomain& domain) {
    if (n_samples < 0)
        throw InvalidParams("sample count must be nonnegative");
    if (dist.size() != domain.bin_count())
        throw SizeMismatch("distribution length does not match the domain's bin count");
    CategoricalSampler sampler(dist);
    std::mt19937_64 gen(seed);
    return Histogram(std::move(list_id), domain, sampler.draw_counts(n_samples, gen));
}

std::vector<Histogram> make_set(const GeneratorSpec& spec) {
    if (!spec.outlier_ids.empty() && !spec.outlier_distribution)
        throw InvalidParams("outlier ids given without an outlier distribution");
    for (std::size_t id : spec.outlier_ids) {
        if (id >= spec.sizes.size())
            throw InvalidParams("outlier id exceeds the number of sizes");
    }
    std::vector<Histogram> out;
    out.reserve(spec.sizes.size());
    for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "-%04zu", i);
        const std::vector<double>& dist = spec.outlier_ids.count(i)
                                              ? *spec.outlier_distribution
                                              : spec.base_distribution;
        out.push_back(sample_histogram(spec.id_prefix + suffix, dist, spec.sizes[i],
                                       derive_seed(spec.seed, i), spec.domain));
    }
    return out;
}

AgeRoundingResult age_rounding_simulation(const AgeRoundingParams& params) {
    if (params.n_samples < 0)
        throw InvalidParams("sample count must be nonnegative");
    if (!std::isfinite(params.rounding_fraction) ||
        params.rounding_fraction < 0.0 || params.rounding_fraction > 1.0)
        throw InvalidParams("rounding fraction must lie in [0, 1]");
    CategoricalSampler age_sampler(params.age_dist);
    std::mt19937_64 gen(params.seed);

    std::vector<std::int64_t> counts(params.domain.bin_count(), 0);
    std::int64_t dropped = 0;
    for (std::int64_t s = 0; s < params.n_samples; ++s) {
        int age = static_cast<int>(age_sampler.draw(gen));
        if (next_unit(gen) < params.rounding_fraction)
            age = ((age + 5) / 10) * 10; // nearest decade; ages ending in 5 round up
        const long long birth = static_cast<long long>(params.death_year) - age;
        if (params.domain.contains(birth))
            ++counts[params.domain.index_of(birth)];
        else
            ++dropped;
    }
    return AgeRoundingResult{Histogram(params.list_id, params.domain, std::move(counts)), dropped};
}

namespace {

std::string join_doubles(std::span<const double> values) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        if (i)
            out += ',';
        out += buf;
    }
    return out;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> parts;
    while (true) {
        const std::size_t pos = s.find(',');
        parts.push_back(trimmed(s.substr(0, pos)));
        if (pos == std::string_view::npos)
            break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

double parse_double_field(std::string_view field, int line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw IngestError("synth spec line " + std::to_string(line_no) +
                          ": expected a number, got '" + std::string(field) + "'");
    return value;
}

std::int64_t parse_int_field(std::string_view field, int line_no) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw IngestError("synth spec line " + std::to_string(line_no) +
                          ": expected an integer, got '" + std::string(field) + "'");
    return value;
}

std::vector<double> parse_double_list(std::string_view field, int line_no) {
    std::vector<double> out;
    for (std::string_view part : split_commas(field))
        out.push_back(parse_double_field(part, line_no));
    return out;
}

// State for one of the two distribution slots (base / outlier) while parsing.
struct DistSpec {
    std::string kind; // "uniform", "bell", "ramp", "custom", or "" if unset
    BaseParams params;
    std::vector<double> values;
    double comb_depth = 0.0;

    std::vector<double> build(const BinDomain& domain, const char* slot) const {
        std::vector<double> dist;
        if (kind == "uniform") {
            dist = smooth_base(domain, BaseKind::Uniform, params);
        } else if (kind == "bell") {
            dist = smooth_base(domain, BaseKind::DiscretizedBell, params);
        } else if (kind == "ramp") {
            dist = smooth_base(domain, BaseKind::LinearRamp, params);
        } else if (kind == "custom") {
            if (values.empty())
                throw IngestError(std::string("synth spec: ") + slot + " = custom needs " + slot + "_values");
            dist = values;
        } else {
            throw IngestError(std::string("synth spec: unknown ") + slot + " kind '" + kind + "'");
        }
        if (comb_depth > 0.0)
            dist = comb_modulate(dist, comb_depth);
        return dist;
    }
};

} // namespace

std::string serialize_generator_spec(const GeneratorSpec& spec) {
    std::ostringstream out;
    out << "domain = " << spec.domain.min_year() << ':' << spec.domain.max_year() << '\n';
    out << "seed = " << spec.seed << '\n';
    out << "id_prefix = " << spec.id_prefix << '\n';
    out << "sizes = ";
    for (std::size_t i = 0; i < spec.sizes.size(); ++i)
        out << (i ? "," : "") << spec.sizes[i];
    out << '\n';
    out << "base = custom\n";
    out << "base_values = " << join_doubles(spec.base_distribution) << '\n';
    if (spec.outlier_distribution) {
        out << "outlier = custom\n";
        out << "outlier_values = " << join_doubles(*spec.outlier_distribution) << '\n';
    }
    if (!spec.outlier_ids.empty()) {
        out << "outlier_ids = ";
        bool first = true;
        for (std::size_t id : spec.outlier_ids) {
            out << (first ? "" : ",") << id;
            first = false;
        }
        out << '\n';
    }
    return std::move(out).str();
}

GeneratorSpec parse_generator_spec(std::string_view text) {
    GeneratorSpec spec;
    DistSpec base, outlier;
    bool saw_sizes = false;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trimmed(line);
        if (line.empty())
            continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw IngestError("synth spec line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trimmed(line.substr(0, eq)));
        const std::string_view value = trimmed(line.substr(eq + 1));

        if (key == "domain") {
            const std::size_t colon = value.find(':');
            if (colon == std::string_view::npos)
                throw IngestError("synth spec line " + std::to_string(line_no) +
                                  ": domain must be MIN:MAX");
            const std::int64_t lo = parse_int_field(trimmed(value.substr(0, colon)), line_no);
            const std::int64_t hi = parse_int_field(trimmed(value.substr(colon + 1)), line_no);
            if (lo < -1000000 || hi > 1000000)
                throw IngestError("synth spec line " + std::to_string(line_no) +
                                  ": domain bounds out of range");
            spec.domain = BinDomain(static_cast<int>(lo), static_cast<int>(hi));
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(parse_int_field(value, line_no));
        } else if (key == "id_prefix") {
            spec.id_prefix = std::string(value);
        } else if (key == "sizes") {
            saw_sizes = true;
            spec.sizes.clear();
            if (value.starts_with("logspace:")) {
                std::vector<std::string_view> fields;
                std::string_view rest = value.substr(9);
                while (true) {
                    const std::size_t pos = rest.find(':');
                    fields.push_back(trimmed(rest.substr(0, pos)));
                    if (pos == std::string_view::npos)
                        break;
                    rest.remove_prefix(pos + 1);
                }
                if (fields.size() != 3)
                    throw IngestError("synth spec line " + std::to_string(line_no) +
                                      ": sizes = logspace:MIN:MAX:COUNT");
                const double lo = parse_double_field(fields[0], line_no);
                const double hi = parse_double_field(fields[1], line_no);
                const std::int64_t count = parse_int_field(fields[2], line_no);
                if (!(lo > 0.0) || !(hi >= lo) || count < 1)
                    throw IngestError("synth spec line " + std::to_string(line_no) +
                                      ": logspace needs 0 < MIN <= MAX and COUNT >= 1");
                for (std::int64_t i = 0; i < count; ++i) {
                    const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
                    spec.sizes.push_back(static_cast<std::int64_t>(
                        std::llround(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))))));
                }
            } else {
                for (std::string_view part : split_commas(value))
                    spec.sizes.push_back(parse_int_field(part, line_no));
            }
        } else if (key == "base") {
            base.kind = std::string(value);
        } else if (key == "base_center") {
            base.params.center = parse_double_field(value, line_no);
        } else if (key == "base_width") {
            base.params.width = parse_double_field(value, line_no);
        } else if (key == "base_ramp_start") {
            base.params.ramp_start = parse_double_field(value, line_no);
        } else if (key == "base_ramp_stop") {
            base.params.ramp_stop = parse_double_field(value, line_no);
        } else if (key == "base_values") {
            base.values = parse_double_list(value, line_no);
        } else if (key == "base_comb_depth") {
            base.comb_depth = parse_double_field(value, line_no);
        } else if (key == "outlier") {
            outlier.kind = std::string(value);
        } else if (key == "outlier_center") {
            outlier.params.center = parse_double_field(value, line_no);
        } else if (key == "outlier_width") {
            outlier.params.width = parse_double_field(value, line_no);
        } else if (key == "outlier_ramp_start") {
            outlier.params.ramp_start = parse_double_field(value, line_no);
        } else if (key == "outlier_ramp_stop") {
            outlier.params.ramp_stop = parse_double_field(value, line_no);
        } else if (key == "outlier_values") {
            outlier.values = parse_double_list(value, line_no);
        } else if (key == "outlier_comb_depth") {
            outlier.comb_depth = parse_double_field(value, line_no);
        } else if (key == "outlier_ids") {
            spec.outlier_ids.clear();
            for (std::string_view part : split_commas(value)) {
                const std::int64_t id = parse_int_field(part, line_no);
                if (id < 0)
                    throw IngestError("synth spec line " + std::to_string(line_no) +
                                      ": outlier ids must be nonnegative");
                spec.outlier_ids.insert(static_cast<std::size_t>(id));
            }
        } else {
            throw IngestError("synth spec line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }

    if (base.kind.empty())
        throw IngestError("synth spec: missing required key 'base'");
    if (!saw_sizes)
        throw IngestError("synth spec: missing required key 'sizes'");
    spec.base_distribution = base.build(spec.domain, "base");
    if (!outlier.kind.empty())
        spec.outlier_distribution = outlier.build(spec.domain, "outlier");
    return spec;
}

} // namespace tvaudit
