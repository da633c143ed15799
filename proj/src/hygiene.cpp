#include "tvaudit/hygiene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tvaudit {

FilterResult filter_year_range(const RawRecordSet& raw, const BinDomain& domain) {
    std::vector<std::int64_t> counts(domain.bin_count(), 0);
    std::int64_t dropped = 0;
    for (long long year : raw.years) {
        if (domain.contains(year)) {
            ++counts[domain.index_of(year)];
        } else {
            ++dropped;
        }
    }
    return {Histogram{raw.list_id, domain, std::move(counts)}, dropped};
}

FilterResult filter_year_counts(std::string list_id,
                                std::span<const std::pair<long long, std::int64_t>> year_counts,
                                const BinDomain& domain) {
    std::vector<std::int64_t> counts(domain.bin_count(), 0);
    std::int64_t dropped = 0;
    for (const auto& [year, count] : year_counts) {
        if (count < 0) {
            throw NegativeCount("list '" + list_id + "': negative count for year " +
                                std::to_string(year));
        }
        if (domain.contains(year)) {
            counts[domain.index_of(year)] += count;
        } else {
            dropped += count;
        }
    }
    return {Histogram{std::move(list_id), domain, std::move(counts)}, dropped};
}

namespace {

void require_same_domain(const Histogram& a, const Histogram& b) {
    if (!(a.domain() == b.domain())) {
        throw DomainMismatch("lists '" + a.list_id() + "' and '" + b.list_id() +
                             "' have different bin domains");
    }
}

std::int64_t overlap_mass(const Histogram& a, const Histogram& b) {
    std::int64_t overlap = 0;
    const auto ca = a.counts();
    const auto cb = b.counts();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        overlap += std::min(ca[i], cb[i]);
    }
    return overlap;
}

} // namespace

double list_similarity(const Histogram& a, const Histogram& b) {
    require_same_domain(a, b);
    const std::int64_t larger = std::max(a.total(), b.total());
    if (larger == 0) {
        return 1.0; // two empty lists have identical count vectors
    }
    return static_cast<double>(overlap_mass(a, b)) / static_cast<double>(larger);
}

double containment(const Histogram& sub, const Histogram& sup) {
    require_same_domain(sub, sup);
    if (sub.total() == 0) {
        throw EmptySublist("list '" + sub.list_id() + "' is empty; containment is undefined");
    }
    return static_cast<double>(overlap_mass(sub, sup)) / static_cast<double>(sub.total());
}

std::string_view to_string(PairVerdict verdict) {
    switch (verdict) {
    case PairVerdict::Duplicate: return "duplicate";
    case PairVerdict::NearDuplicate: return "near_duplicate";
    case PairVerdict::Contained: return "contained";
    case PairVerdict::Distinct: return "distinct";
    }
    return "?";
}

DuplicationReport find_duplicates(std::span<const Histogram> histograms,
                                  const DedupeOptions& options) {
    if (!(options.sim_threshold > 0.0 && options.sim_threshold <= 1.0) ||
        !(options.cont_threshold > 0.0 && options.cont_threshold <= 1.0)) {
        throw InvalidParams("dedupe thresholds must lie in (0, 1]");
    }

    DuplicationReport report;
    for (std::size_t i = 0; i < histograms.size(); ++i) {
        for (std::size_t j = i + 1; j < histograms.size(); ++j) {
            const Histogram* a = &histograms[i];
            const Histogram* b = &histograms[j];
            if (b->list_id() < a->list_id()) {
                std::swap(a, b);
            }
            require_same_domain(*a, *b);

            const std::int64_t na = a->total();
            const std::int64_t nb = b->total();
            if (!options.check_containment) {
                const std::int64_t lo = std::min(na, nb);
                const std::int64_t hi = std::max(na, nb);
                if (lo * 100 < hi) {
                    continue;
                }
            }
            if (na == 0 && nb == 0) {
                continue; // empty pairs carry no evidence either way
            }

            const std::int64_t overlap = overlap_mass(*a, *b);
            PairFinding finding;
            finding.id_a = a->list_id();
            finding.id_b = b->list_id();
            finding.similarity =
                static_cast<double>(overlap) / static_cast<double>(std::max(na, nb));
            finding.containment_ab =
                na > 0 ? static_cast<double>(overlap) / static_cast<double>(na) : 0.0;
            finding.containment_ba =
                nb > 0 ? static_cast<double>(overlap) / static_cast<double>(nb) : 0.0;

            const bool equal_counts = na == nb && overlap == na;
            if (equal_counts) {
                finding.verdict = PairVerdict::Duplicate;
            } else if (finding.similarity >= options.sim_threshold) {
                finding.verdict = PairVerdict::NearDuplicate;
            } else if (options.check_containment &&
                       (finding.containment_ab >= options.cont_threshold ||
                        finding.containment_ba >= options.cont_threshold)) {
                finding.verdict = PairVerdict::Contained;
            } else {
                continue;
            }
            report.pairs.push_back(std::move(finding));
        }
    }

    std::sort(report.pairs.begin(), report.pairs.end(),
              [](const PairFinding& lhs, const PairFinding& rhs) {
                  if (lhs.id_a != rhs.id_a) {
                      return lhs.id_a < rhs.id_a;
                  }
                  return lhs.id_b < rhs.id_b;
              });
    return report;
}

DigitProfile digit_profile(const Histogram& h, double flag_threshold) {
    if (h.total() == 0) {
        throw EmptyHistogram("list '" + h.list_id() + "' has no records");
    }
    if (!(flag_threshold > 0.0) || !std::isfinite(flag_threshold)) {
        throw InvalidParams("digit flag threshold must be positive and finite");
    }

    DigitProfile profile;
    profile.list_id = h.list_id();
    profile.size_n = h.total();
    const auto counts = h.counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const long long year = h.domain().year_at(i);
        const int digit = static_cast<int>(((year % 10) + 10) % 10);
        profile.digit_counts[static_cast<std::size_t>(digit)] += counts[i];
    }

    const double n = static_cast<double>(profile.size_n);
    const double uniform = n / 10.0;
    std::int64_t mid_decade = 0;
    for (int d = 0; d < 10; ++d) {
        const double count = static_cast<double>(profile.digit_counts[static_cast<std::size_t>(d)]);
        profile.digit_indices[static_cast<std::size_t>(d)] = 10.0 * count / n;
        profile.chi_square += (count - uniform) * (count - uniform) / uniform;
        if (d >= 4 && d <= 8) {
            mid_decade += profile.digit_counts[static_cast<std::size_t>(d)];
        }
        if (profile.digit_indices[static_cast<std::size_t>(d)] >= flag_threshold) {
            profile.flagged_digits.push_back(d);
        }
    }
    profile.mid_decade_index = 2.0 * static_cast<double>(mid_decade) / n;
    return profile;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Splits a line on the first delimiter class found: comma, semicolon, tab,
// or runs of spaces. Returns trimmed, nonempty fields.
std::vector<std::string_view> split_fields(std::string_view line) {
    char delimiter = '\0';
    for (char c : line) {
        if (c == ',' || c == ';' || c == '\t') {
            delimiter = c;
            break;
        }
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        const bool at_end = i == line.size();
        const bool is_delim =
            !at_end && (delimiter != '\0' ? line[i] == delimiter : line[i] == ' ');
        if (at_end || is_delim) {
            const std::string_view field = trim(line.substr(start, i - start));
            if (!field.empty()) {
                fields.push_back(field);
            }
            start = i + 1;
        }
    }
    return fields;
}

long long parse_integer(std::string_view field, std::string_view source, std::size_t line_no,
                        std::string_view what) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw IngestError(std::string(source) + ":" + std::to_string(line_no) + ": cannot parse " +
                          std::string(what) + " from '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

RawList parse_list_text(std::string_view text, std::string list_id, std::string_view source) {
    // Strip a UTF-8 byte-order mark if present.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    RawList list;
    list.list_id = std::move(list_id);

    int layout = 0; // 0 unknown, 1 years, 2 counts
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view raw_line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::string_view line = trim(raw_line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const std::vector<std::string_view> fields = split_fields(line);
        if (fields.size() != 1 && fields.size() != 2) {
            throw IngestError(std::string(source) + ":" + std::to_string(line_no) +
                              ": expected 1 or 2 fields, got " + std::to_string(fields.size()));
        }
        const int line_layout = fields.size() == 1 ? 1 : 2;
        if (layout == 0) {
            layout = line_layout;
        } else if (layout != line_layout) {
            throw IngestError(std::string(source) + ":" + std::to_string(line_no) +
                              ": mixed year-per-line and year,count layouts");
        }

        const long long year = parse_integer(fields[0], source, line_no, "year");
        if (line_layout == 1) {
            list.year_counts.emplace_back(year, 1);
        } else {
            const long long count = parse_integer(fields[1], source, line_no, "count");
            if (count < 0) {
                throw IngestError(std::string(source) + ":" + std::to_string(line_no) +
                                  ": negative count " + std::to_string(count));
            }
            list.year_counts.emplace_back(year, count);
        }
    }
    return list;
}

RawList read_list_file(const std::filesystem::path& path, std::string_view id_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open list file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string list_id =
        id_override.empty() ? path.stem().string() : std::string(id_override);
    return parse_list_text(buffer.str(), std::move(list_id), path.string());
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open manifest '" + path.string() + "'");
    }
    std::map<std::string, std::string> mapping;
    std::string raw_line;
    std::size_t line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string_view line = trim(raw_line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const std::vector<std::string_view> fields = split_fields(line);
        if (fields.size() != 2) {
            throw IngestError(path.string() + ":" + std::to_string(line_no) +
                              ": manifest lines are 'filename,list_id'");
        }
        mapping[std::string(fields[0])] = std::string(fields[1]);
    }
    return mapping;
}

void write_counts_file(const Histogram& h, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IngestError("cannot write list file '" + path.string() + "'");
    }
    const auto counts = h.counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] != 0) {
            out << h.domain().year_at(i) << ',' << counts[i] << '\n';
        }
    }
    if (!out) {
        throw IngestError("failed writing list file '" + path.string() + "'");
    }
}

} // namespace tvaudit
