#include "tvaudit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvaudit/core.hpp"
#include "tvaudit/diagnostics.hpp"
#include "tvaudit/errors.hpp"
#include "tvaudit/fitting.hpp"
#include "tvaudit/hygiene.hpp"
#include "tvaudit/report_util.hpp"
#include "tvaudit/scoring.hpp"
#include "tvaudit/synth.hpp"
#include "tvaudit/version.hpp"

namespace tvaudit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Command command) {
    switch (command) {
    case Command::Score: return "score";
    case Command::Bias: return "bias";
    case Command::Dispersion: return "dispersion";
    case Command::Dedupe: return "dedupe";
    case Command::Heaping: return "heaping";
    case Command::Synth: return "synth";
    }
    return "?";
}

std::string_view to_string(OutputFormat format) {
    return format == OutputFormat::Json ? "json" : "csv";
}

namespace {

Command command_from_string(std::string_view name) {
    for (Command c : {Command::Score, Command::Bias, Command::Dispersion, Command::Dedupe,
                      Command::Heaping, Command::Synth}) {
        if (to_string(c) == name)
            return c;
    }
    throw IngestError("config: unknown command '" + std::string(name) + "'");
}

OutputFormat format_from_string(std::string_view name) {
    if (name == "json")
        return OutputFormat::Json;
    if (name == "csv")
        return OutputFormat::Csv;
    throw IngestError("config: unknown format '" + std::string(name) + "'");
}

bool parse_range(std::string_view text, std::int64_t& lo, std::int64_t& hi) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        return false;
    const std::string_view a = text.substr(0, colon);
    const std::string_view b = text.substr(colon + 1);
    const auto [pa, ea] = std::from_chars(a.data(), a.data() + a.size(), lo);
    const auto [pb, eb] = std::from_chars(b.data(), b.data() + b.size(), hi);
    return ea == std::errc() && pa == a.data() + a.size() &&
           eb == std::errc() && pb == b.data() + b.size();
}

std::span<const BasisTerm> basis_from_name(const std::string& name) {
    if (name == "n1")
        return kAffineBasis;
    if (name == "n-sqrt-1")
        return kFullBasis;
    throw InvalidParams("unknown basis '" + name + "' (expected n1 or n-sqrt-1)");
}

std::string read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IngestError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

// One ingested list file per index across the three vectors.
struct Corpus {
    std::vector<Histogram> histograms;
    std::vector<std::int64_t> dropped;
    std::vector<std::string> paths;
    std::vector<std::string> digests;
};

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs,
                                    const std::string& manifest_path) {
    std::vector<fs::path> files;
    for (const std::string& input : inputs) {
        const fs::path p(input);
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> entries;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (!entry.is_regular_file())
                    continue;
                const std::string name = entry.path().filename().string();
                if (!name.empty() && name.front() == '.')
                    continue;
                entries.push_back(entry.path());
            }
            std::sort(entries.begin(), entries.end());
            files.insert(files.end(), entries.begin(), entries.end());
        } else if (fs::is_regular_file(p, ec)) {
            files.push_back(p);
        } else {
            throw IngestError("input not found: " + input);
        }
    }
    if (!manifest_path.empty()) {
        const fs::path m(manifest_path);
        std::erase_if(files, [&](const fs::path& f) {
            std::error_code ec;
            return fs::equivalent(f, m, ec);
        });
    }
    return files;
}

Corpus load_corpus(const RunConfig& config) {
    const BinDomain domain(config.domain_min, config.domain_max);
    std::map<std::string, std::string> manifest;
    if (!config.manifest_path.empty())
        manifest = read_manifest(config.manifest_path);

    Corpus corpus;
    for (const fs::path& path : expand_inputs(config.inputs, config.manifest_path)) {
        const std::string bytes = read_file_bytes(path);
        std::string list_id = path.stem().string();
        if (const auto it = manifest.find(path.filename().string()); it != manifest.end())
            list_id = it->second;
        const RawList raw = parse_list_text(bytes, std::move(list_id), path.string());
        FilterResult filtered = filter_year_counts(raw.list_id, raw.year_counts, domain);
        corpus.histograms.push_back(std::move(filtered.histogram));
        corpus.dropped.push_back(filtered.dropped);
        corpus.paths.push_back(path.string());
        corpus.digests.push_back("fnv1a64:" + fnv1a64_hex(bytes));
    }
    return corpus;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(s);
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

// Provenance rows: (path, digest) of every byte stream the report depends on.
using InputRows = std::vector<std::pair<std::string, std::string>>;

ordered_json report_head(const RunConfig& config, const InputRows& rows) {
    ordered_json j;
    j["tool"] = ordered_json{{"name", kToolName}, {"version", kToolVersion}};
    j["command"] = std::string(to_string(config.command));
    j["config"] = ordered_json::parse(serialize_config(config));
    ordered_json inputs = ordered_json::array();
    for (const auto& [path, digest] : rows)
        inputs.push_back(ordered_json{{"path", path}, {"digest", digest}});
    j["inputs"] = std::move(inputs);
    return j;
}

void csv_head(std::ostream& os, const RunConfig& config, const InputRows& rows) {
    os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
    os << "# command: " << to_string(config.command) << '\n';
    os << "# config: " << serialize_config(config) << '\n';
    for (const auto& [path, digest] : rows)
        os << "# input: " << path << ' ' << digest << '\n';
}

InputRows input_rows(const RunConfig& config, const Corpus& corpus) {
    InputRows rows;
    if (!config.manifest_path.empty())
        rows.emplace_back(config.manifest_path,
                          "fnv1a64:" + fnv1a64_hex(read_file_bytes(config.manifest_path)));
    for (std::size_t i = 0; i < corpus.paths.size(); ++i)
        rows.emplace_back(corpus.paths[i], corpus.digests[i]);
    return rows;
}

ordered_json fit_json(const ExpectedDtvFit& fit) {
    return ordered_json{{"a", round_sig9(fit.a)},
                        {"b", round_sig9(fit.b)},
                        {"points", fit.point_count},
                        {"rss", round_sig9(fit.residual_sum_squares)}};
}

std::string fit_comment(const ExpectedDtvFit& fit) {
    return "a=" + format_sig9(fit.a) + " b=" + format_sig9(fit.b) +
           " points=" + std::to_string(fit.point_count) +
           " rss=" + format_sig9(fit.residual_sum_squares);
}

ordered_json basis_fit_json(const BasisFit& fit) {
    ordered_json terms = ordered_json::array();
    for (BasisTerm t : fit.basis)
        terms.push_back(std::string(basis_term_name(t)));
    ordered_json coefs = ordered_json::array();
    for (double c : fit.coefficients)
        coefs.push_back(round_sig9(c));
    return ordered_json{{"basis", std::move(terms)},
                        {"coefficients", std::move(coefs)},
                        {"points", fit.point_count},
                        {"rss", round_sig9(fit.residual_sum_squares)}};
}

std::string basis_fit_comment(const BasisFit& fit) {
    std::vector<std::string> terms, coefs;
    for (BasisTerm t : fit.basis)
        terms.emplace_back(basis_term_name(t));
    for (double c : fit.coefficients)
        coefs.push_back(format_sig9(c));
    return "basis=" + join(terms, ';') + " coefficients=" + join(coefs, ';') +
           " points=" + std::to_string(fit.point_count) +
           " rss=" + format_sig9(fit.residual_sum_squares);
}

void cmd_score(const RunConfig& config, std::ostream& os) {
    const Corpus corpus = load_corpus(config);
    if (corpus.histograms.size() < 2)
        throw InsufficientPoints("scoring needs at least two lists, got " +
                                 std::to_string(corpus.histograms.size()));
    const std::set<std::string> exclude(config.exclude.begin(), config.exclude.end());
    const DatasetScores scores = score_dataset(corpus.histograms, exclude);

    std::vector<ScoreRecord> records = scores.records;
    std::optional<BasisFit> renorm_model;
    if (config.renormalize) {
        const BiasReport bias = diagnose_size_bias(scores.records, basis_from_name(config.basis),
                                                   std::span<const std::int64_t>{}, exclude);
        renorm_model = bias.model;
        records = renormalize_scores(std::move(records), *renorm_model);
    }
    records = rank_records(records, config.renormalize ? RankKey::DRen : RankKey::DPrime);

    std::map<std::string, std::int64_t> dropped_by_id;
    for (std::size_t i = 0; i < corpus.histograms.size(); ++i)
        dropped_by_id.emplace(corpus.histograms[i].list_id(), corpus.dropped[i]);

    const InputRows rows = input_rows(config, corpus);
    if (config.format == OutputFormat::Json) {
        ordered_json j = report_head(config, rows);
        j["fit"] = fit_json(scores.fit);
        if (renorm_model)
            j["renorm_model"] = basis_fit_json(*renorm_model);
        ordered_json skipped = ordered_json::array();
        for (const std::string& id : scores.skipped_empty)
            skipped.push_back(ordered_json{{"list_id", id}, {"dropped", dropped_by_id[id]}});
        j["skipped_empty"] = std::move(skipped);
        ordered_json recs = ordered_json::array();
        for (const ScoreRecord& r : records) {
            ordered_json rec;
            rec["list_id"] = r.list_id;
            rec["n"] = r.size_n;
            rec["dtv"] = r.dtv;
            rec["expected_dtv"] = round_sig9(r.expected_dtv);
            rec["d_prime"] = round_sig9(r.d_prime);
            rec["d_signed"] = round_sig9(r.d_signed);
            if (r.d_ren)
                rec["d_ren"] = round_sig9(*r.d_ren);
            rec["dropped"] = dropped_by_id[r.list_id];
            recs.push_back(std::move(rec));
        }
        j["records"] = std::move(recs);
        os << j.dump(2) << '\n';
    } else {
        csv_head(os, config, rows);
        os << "# fit: " << fit_comment(scores.fit) << '\n';
        if (renorm_model)
            os << "# renorm_model: " << basis_fit_comment(*renorm_model) << '\n';
        if (!scores.skipped_empty.empty()) {
            std::vector<std::string> parts;
            for (const std::string& id : scores.skipped_empty)
                parts.push_back(id + "(dropped=" + std::to_string(dropped_by_id[id]) + ")");
            os << "# skipped_empty: " << join(parts, ';') << '\n';
        }
        os << "list_id,n,dtv,expected_dtv,d_prime,d_signed"
           << (config.renormalize ? ",d_ren" : "") << ",dropped\n";
        for (const ScoreRecord& r : records) {
            os << csv_field(r.list_id) << ',' << r.size_n << ',' << r.dtv << ','
               << format_sig9(r.expected_dtv) << ',' << format_sig9(r.d_prime) << ','
               << format_sig9(r.d_signed);
            if (config.renormalize)
                os << ',' << format_sig9(*r.d_ren);
            os << ',' << dropped_by_id[r.list_id] << '\n';
        }
    }
}

void write_bias_points(std::ostream& os, std::span<const ScoreRecord> records,
                       const BasisFit& model) {
    os << "list_id,n,d_prime,d_bar,d_ren\n";
    for (const ScoreRecord& r : records) {
        const double d_bar = eval_basis(model, r.size_n);
        if (!(d_bar > 0.0))
            throw NonpositiveExpectedScore("model value " + format_sig9(d_bar) +
                                           " at n=" + std::to_string(r.size_n) +
                                           " for list " + r.list_id);
        os << csv_field(r.list_id) << ',' << r.size_n << ',' << format_sig9(r.d_prime) << ','
           << format_sig9(d_bar) << ',' << format_sig9(r.d_prime / d_bar) << '\n';
    }
}

void cmd_bias(const RunConfig& config, std::ostream& os) {
    const Corpus corpus = load_corpus(config);
    const std::set<std::string> exclude(config.exclude.begin(), config.exclude.end());
    const DatasetScores scores = score_dataset(corpus.histograms, exclude);
    const BiasReport bias = diagnose_size_bias(scores.records, basis_from_name(config.basis),
                                               config.probes, exclude);

    const InputRows rows = input_rows(config, corpus);
    if (config.format == OutputFormat::Json) {
        ordered_json j = report_head(config, rows);
        j["model"] = basis_fit_json(bias.model);
        j["slope"] = round_sig9(bias.slope_like_summary);
        j["excluded"] = bias.excluded;
        ordered_json probes = ordered_json::array();
        for (const auto& [n, value] : bias.expected_score_at)
            probes.push_back(ordered_json{{"n", n}, {"expected_d_prime", round_sig9(value)}});
        j["probes"] = std::move(probes);
        ordered_json points = ordered_json::array();
        for (const ScoreRecord& r : scores.records) {
            const double d_bar = eval_basis(bias.model, r.size_n);
            if (!(d_bar > 0.0))
                throw NonpositiveExpectedScore("model value " + format_sig9(d_bar) +
                                               " at n=" + std::to_string(r.size_n) +
                                               " for list " + r.list_id);
            points.push_back(ordered_json{{"list_id", r.list_id},
                                          {"n", r.size_n},
                                          {"d_prime", round_sig9(r.d_prime)},
                                          {"d_bar", round_sig9(d_bar)},
                                          {"d_ren", round_sig9(r.d_prime / d_bar)}});
        }
        j["points"] = std::move(points);
        os << j.dump(2) << '\n';
    } else {
        csv_head(os, config, rows);
        os << "# model: " << basis_fit_comment(bias.model) << '\n';
        os << "# slope: " << format_sig9(bias.slope_like_summary) << '\n';
        if (!bias.excluded.empty())
            os << "# excluded: " << join(bias.excluded, ';') << '\n';
        os << "# probes\n";
        os << "n,expected_d_prime\n";
        for (const auto& [n, value] : bias.expected_score_at)
            os << n << ',' << format_sig9(value) << '\n';
        os << "# points\n";
        write_bias_points(os, scores.records, bias.model);
    }

    if (!config.points_out.empty()) {
        std::ofstream points_file(config.points_out, std::ios::binary);
        if (!points_file)
            throw IngestError("cannot open output file " + config.points_out);
        write_bias_points(points_file, scores.records, bias.model);
    }
}

void cmd_dispersion(const RunConfig& config, std::ostream& os) {
    const Corpus corpus = load_corpus(config);
    const DispersionReport report =
        dispersion_test(corpus.histograms, config.window_min, config.window_max, config.width);

    std::map<std::string, std::int64_t> size_by_id;
    for (const Histogram& h : corpus.histograms)
        size_by_id.emplace(h.list_id(), h.total());

    const InputRows rows = input_rows(config, corpus);
    if (config.format == OutputFormat::Json) {
        ordered_json j = report_head(config, rows);
        j["window"] = ordered_json{{"n_min", report.n_min}, {"n_max", report.n_max}};
        j["width"] = round_sig9(report.window_width);
        j["selected"] = report.selected_ids.size();
        j["max_fraction_in_window"] = round_sig9(report.max_fraction_in_window);
        j["best_window_location"] = round_sig9(report.best_window_location);
        ordered_json scores = ordered_json::array();
        for (std::size_t i = 0; i < report.selected_ids.size(); ++i)
            scores.push_back(ordered_json{{"list_id", report.selected_ids[i]},
                                          {"n", size_by_id[report.selected_ids[i]]},
                                          {"d_signed", round_sig9(report.signed_scores[i])}});
        j["scores"] = std::move(scores);
        os << j.dump(2) << '\n';
    } else {
        csv_head(os, config, rows);
        os << "# window: " << report.n_min << ':' << report.n_max << '\n';
        os << "# width: " << format_sig9(report.window_width) << '\n';
        os << "# selected: " << report.selected_ids.size() << '\n';
        os << "# max_fraction_in_window: " << format_sig9(report.max_fraction_in_window) << '\n';
        os << "# best_window_location: " << format_sig9(report.best_window_location) << '\n';
        os << "list_id,n,d_signed\n";
        for (std::size_t i = 0; i < report.selected_ids.size(); ++i)
            os << csv_field(report.selected_ids[i]) << ',' << size_by_id[report.selected_ids[i]]
               << ',' << format_sig9(report.signed_scores[i]) << '\n';
    }
}

void cmd_dedupe(const RunConfig& config, std::ostream& os) {
    const Corpus corpus = load_corpus(config);
    DedupeOptions options;
    options.sim_threshold = config.sim_threshold;
    options.cont_threshold = config.cont_threshold;
    const DuplicationReport report = find_duplicates(corpus.histograms, options);

    const InputRows rows = input_rows(config, corpus);
    if (config.format == OutputFormat::Json) {
        ordered_json j = report_head(config, rows);
        j["sim_threshold"] = round_sig9(options.sim_threshold);
        j["cont_threshold"] = round_sig9(options.cont_threshold);
        ordered_json pairs = ordered_json::array();
        for (const PairFinding& p : report.pairs)
            pairs.push_back(ordered_json{{"id_a", p.id_a},
                                         {"id_b", p.id_b},
                                         {"similarity", round_sig9(p.similarity)},
                                         {"containment_ab", round_sig9(p.containment_ab)},
                                         {"containment_ba", round_sig9(p.containment_ba)},
                                         {"verdict", std::string(to_string(p.verdict))}});
        j["pairs"] = std::move(pairs);
        os << j.dump(2) << '\n';
    } else {
        csv_head(os, config, rows);
        os << "# sim_threshold: " << format_sig9(options.sim_threshold) << '\n';
        os << "# cont_threshold: " << format_sig9(options.cont_threshold) << '\n';
        os << "id_a,id_b,similarity,containment_ab,containment_ba,verdict\n";
        for (const PairFinding& p : report.pairs)
            os << csv_field(p.id_a) << ',' << csv_field(p.id_b) << ','
               << format_sig9(p.similarity) << ',' << format_sig9(p.containment_ab) << ','
               << format_sig9(p.containment_ba) << ',' << to_string(p.verdict) << '\n';
    }
}

constexpr const char* kDigitIndexNote =
    "index_d = 10*count_d/N over terminal birth-year digits; "
    "mid_decade_index = 2*count_{4..8}/N; both are 1 under uniform digits";

void cmd_heaping(const RunConfig& config, std::ostream& os) {
    const Corpus corpus = load_corpus(config);
    std::vector<DigitProfile> profiles;
    std::vector<std::string> skipped;
    for (const Histogram& h : corpus.histograms) {
        if (h.total() == 0) {
            skipped.push_back(h.list_id());
            continue;
        }
        profiles.push_back(digit_profile(h, config.flag_threshold));
    }

    const InputRows rows = input_rows(config, corpus);
    if (config.format == OutputFormat::Json) {
        ordered_json j = report_head(config, rows);
        j["flag_threshold"] = round_sig9(config.flag_threshold);
        j["definition"] = kDigitIndexNote;
        j["skipped_empty"] = skipped;
        ordered_json lists = ordered_json::array();
        for (const DigitProfile& p : profiles) {
            ordered_json row;
            row["list_id"] = p.list_id;
            row["n"] = p.size_n;
            row["digit_counts"] = p.digit_counts;
            ordered_json indices = ordered_json::array();
            for (double v : p.digit_indices)
                indices.push_back(round_sig9(v));
            row["digit_indices"] = std::move(indices);
            row["mid_decade_index"] = round_sig9(p.mid_decade_index);
            row["chi_square"] = round_sig9(p.chi_square);
            row["flagged_digits"] = p.flagged_digits;
            lists.push_back(std::move(row));
        }
        j["lists"] = std::move(lists);
        os << j.dump(2) << '\n';
    } else {
        csv_head(os, config, rows);
        os << "# flag_threshold: " << format_sig9(config.flag_threshold) << '\n';
        os << "# definition: " << kDigitIndexNote << '\n';
        if (!skipped.empty())
            os << "# skipped_empty: " << join(skipped, ';') << '\n';
        os << "list_id,n";
        for (int d = 0; d < 10; ++d)
            os << ",count_" << d;
        for (int d = 0; d < 10; ++d)
            os << ",index_" << d;
        os << ",mid_decade_index,chi_square,flagged_digits\n";
        for (const DigitProfile& p : profiles) {
            os << csv_field(p.list_id) << ',' << p.size_n;
            for (std::int64_t c : p.digit_counts)
                os << ',' << c;
            for (double v : p.digit_indices)
                os << ',' << format_sig9(v);
            os << ',' << format_sig9(p.mid_decade_index) << ',' << format_sig9(p.chi_square);
            std::vector<std::string> flags;
            for (int d : p.flagged_digits)
                flags.push_back(std::to_string(d));
            os << ',' << join(flags, ';') << '\n';
        }
    }
}

void cmd_synth(const RunConfig& config, std::ostream& os) {
    const std::string bytes = read_file_bytes(config.spec_path);
    GeneratorSpec spec = parse_generator_spec(bytes);
    if (config.seed != 0)
        spec.seed = config.seed;

    const std::vector<Histogram> histograms = make_set(spec);
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    for (const Histogram& h : histograms) {
        fs::path path = out_dir / (h.list_id() + ".csv");
        write_counts_file(h, path);
        written.push_back(path.string());
    }

    const InputRows rows = {{config.spec_path, "fnv1a64:" + fnv1a64_hex(bytes)}};
    if (config.format == OutputFormat::Json) {
        ordered_json j = report_head(config, rows);
        j["seed"] = spec.seed;
        j["out_dir"] = config.out_dir;
        ordered_json generated = ordered_json::array();
        for (std::size_t i = 0; i < histograms.size(); ++i)
            generated.push_back(ordered_json{{"list_id", histograms[i].list_id()},
                                             {"path", written[i]},
                                             {"n", histograms[i].total()}});
        j["generated"] = std::move(generated);
        os << j.dump(2) << '\n';
    } else {
        csv_head(os, config, rows);
        os << "# seed: " << spec.seed << '\n';
        os << "# out_dir: " << csv_field(config.out_dir) << '\n';
        os << "list_id,path,n\n";
        for (std::size_t i = 0; i < histograms.size(); ++i)
            os << csv_field(histograms[i].list_id()) << ',' << csv_field(written[i]) << ','
               << histograms[i].total() << '\n';
    }
}

} // namespace

std::string serialize_config(const RunConfig& c) {
    ordered_json j;
    j["command"] = std::string(to_string(c.command));
    j["inputs"] = c.inputs;
    j["manifest"] = c.manifest_path;
    j["domain"] = std::to_string(c.domain_min) + ":" + std::to_string(c.domain_max);
    j["format"] = std::string(to_string(c.format));
    j["out"] = c.out_path;
    j["seed"] = c.seed;
    j["exclude"] = c.exclude;
    j["basis"] = c.basis;
    j["renormalize"] = c.renormalize;
    j["window"] = std::to_string(c.window_min) + ":" + std::to_string(c.window_max);
    j["width"] = c.width;
    j["sim_threshold"] = c.sim_threshold;
    j["cont_threshold"] = c.cont_threshold;
    j["flag_threshold"] = c.flag_threshold;
    j["probes"] = c.probes;
    j["points_out"] = c.points_out;
    j["spec"] = c.spec_path;
    j["out_dir"] = c.out_dir;
    return j.dump();
}

RunConfig parse_config(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(std::string("config: ") + e.what());
    }
    try {
        RunConfig c;
        c.command = command_from_string(j.at("command").get<std::string>());
        c.inputs = j.value("inputs", c.inputs);
        c.manifest_path = j.value("manifest", c.manifest_path);
        std::int64_t lo = c.domain_min, hi = c.domain_max;
        if (j.contains("domain") && !parse_range(j["domain"].get<std::string>(), lo, hi))
            throw IngestError("config: domain must be MIN:MAX");
        c.domain_min = static_cast<int>(lo);
        c.domain_max = static_cast<int>(hi);
        if (j.contains("format"))
            c.format = format_from_string(j["format"].get<std::string>());
        c.out_path = j.value("out", c.out_path);
        c.seed = j.value("seed", c.seed);
        c.exclude = j.value("exclude", c.exclude);
        c.basis = j.value("basis", c.basis);
        c.renormalize = j.value("renormalize", c.renormalize);
        lo = c.window_min;
        hi = c.window_max;
        if (j.contains("window") && !parse_range(j["window"].get<std::string>(), lo, hi))
            throw IngestError("config: window must be MIN:MAX");
        c.window_min = lo;
        c.window_max = hi;
        c.width = j.value("width", c.width);
        c.sim_threshold = j.value("sim_threshold", c.sim_threshold);
        c.cont_threshold = j.value("cont_threshold", c.cont_threshold);
        c.flag_threshold = j.value("flag_threshold", c.flag_threshold);
        c.probes = j.value("probes", c.probes);
        c.points_out = j.value("points_out", c.points_out);
        c.spec_path = j.value("spec", c.spec_path);
        c.out_dir = j.value("out_dir", c.out_dir);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(std::string("config: ") + e.what());
    }
}

void run_command(const RunConfig& config, std::ostream& out) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!config.out_path.empty()) {
        file.open(config.out_path, std::ios::binary);
        if (!file)
            throw IngestError("cannot open output file " + config.out_path);
        os = &file;
    }
    switch (config.command) {
    case Command::Score: cmd_score(config, *os); break;
    case Command::Bias: cmd_bias(config, *os); break;
    case Command::Dispersion: cmd_dispersion(config, *os); break;
    case Command::Dedupe: cmd_dedupe(config, *os); break;
    case Command::Heaping: cmd_heaping(config, *os); break;
    case Command::Synth: cmd_synth(config, *os); break;
    }
    if (file.is_open()) {
        file.flush();
        if (!file)
            throw IngestError("failed writing output file " + config.out_path);
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    std::string domain_str = "1850:1945";
    std::string window_str;
    std::string format_str = "json";

    CLI::App app{"Histogram smoothness scoring and audit toolkit", "tvaudit"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("inputs", config.inputs, "list files and/or directories")->required();
        sub->add_option("--manifest", config.manifest_path,
                        "filename,list_id mapping for ingested files");
        sub->add_option("--domain", domain_str, "year range MIN:MAX (default 1850:1945)");
        sub->add_option("--format", format_str, "report format (default json)")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", config.out_path, "write the report here instead of stdout");
    };

    CLI::App* score = app.add_subcommand("score", "rank lists by smoothness outlier score");
    add_common(score);
    score->add_option("--exclude", config.exclude, "list ids left out of the fit")
        ->delimiter(',');
    score->add_flag("--renormalize", config.renormalize,
                    "divide scores by the fitted score-vs-size trend and rank by the result");
    score->add_option("--basis", config.basis, "trend basis: n1 | n-sqrt-1 (default n1)")
        ->check(CLI::IsMember({"n1", "n-sqrt-1"}));

    CLI::App* bias = app.add_subcommand("bias", "regress outlier scores on list size");
    add_common(bias);
    bias->add_option("--exclude", config.exclude, "list ids left out of the regression")
        ->delimiter(',');
    bias->add_option("--basis", config.basis, "regression basis: n1 | n-sqrt-1 (default n1)")
        ->check(CLI::IsMember({"n1", "n-sqrt-1"}));
    bias->add_option("--probes", config.probes, "sizes at which to tabulate the fitted trend")
        ->delimiter(',');
    bias->add_option("--points-out", config.points_out,
                     "also write the per-list (n, d_prime, d_bar, d_ren) table to this CSV file");

    CLI::App* dispersion =
        app.add_subcommand("dispersion", "score spread of similarly-sized lists");
    add_common(dispersion);
    dispersion->add_option("--window", window_str, "size window MIN:MAX")->required();
    dispersion->add_option("--width", config.width,
                           "length of the score interval to scan (default 10)");

    CLI::App* dedupe = app.add_subcommand("dedupe", "flag duplicated and contained lists");
    add_common(dedupe);
    dedupe->add_option("--sim-threshold", config.sim_threshold,
                       "near-duplicate similarity cutoff (default 0.999)");
    dedupe->add_option("--cont-threshold", config.cont_threshold,
                       "containment cutoff (default 0.999)");

    CLI::App* heaping = app.add_subcommand("heaping", "terminal-digit profile per list");
    add_common(heaping);
    heaping->add_option("--flag-threshold", config.flag_threshold,
                        "digit index at or above which a digit is flagged (default 1.25)");

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus from a spec file");
    synth->add_option("spec", config.spec_path, "generator spec file")->required();
    synth->add_option("--out-dir", config.out_dir, "directory for the generated lists")
        ->required();
    synth->add_option("--seed", config.seed, "override the spec file's seed (nonzero only)");
    synth->add_option("--format", format_str, "report format (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    synth->add_option("--out", config.out_path, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    if (score->parsed())
        config.command = Command::Score;
    else if (bias->parsed())
        config.command = Command::Bias;
    else if (dispersion->parsed())
        config.command = Command::Dispersion;
    else if (dedupe->parsed())
        config.command = Command::Dedupe;
    else if (heaping->parsed())
        config.command = Command::Heaping;
    else if (synth->parsed())
        config.command = Command::Synth;

    std::int64_t lo = 0, hi = 0;
    if (!parse_range(domain_str, lo, hi) || lo < -1000000 || hi > 1000000) {
        err << "tvaudit: --domain expects MIN:MAX\n";
        return 1;
    }
    config.domain_min = static_cast<int>(lo);
    config.domain_max = static_cast<int>(hi);
    if (!window_str.empty()) {
        if (!parse_range(window_str, config.window_min, config.window_max)) {
            err << "tvaudit: --window expects MIN:MAX\n";
            return 1;
        }
    }
    config.format = format_str == "csv" ? OutputFormat::Csv : OutputFormat::Json;

    try {
        run_command(config, out);
        return 0;
    } catch (const IngestError& e) {
        err << "tvaudit: " << e.what() << '\n';
        return 2;
    } catch (const InvalidParams& e) {
        err << "tvaudit: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "tvaudit: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "tvaudit: " << e.what() << '\n';
        return 3;
    }
}

} // namespace tvaudit
