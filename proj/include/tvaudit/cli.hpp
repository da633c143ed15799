#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tvaudit {

enum class Command { Score, Bias, Dispersion, Dedupe, Heaping, Synth };
enum class OutputFormat { Json, Csv };

std::string_view to_string(Command command);
std::string_view to_string(OutputFormat format);

/// One fully-resolved invocation: the defaults below apply whenever the
/// corresponding flag is absent. Reports embed the whole config so a run can
/// be reproduced from its own output.
struct RunConfig {
    Command command = Command::Score;
    std::vector<std::string> inputs;    // list files and/or directories
    std::string manifest_path;          // "" = filenames are the list ids
    int domain_min = 1850;
    int domain_max = 1945;
    OutputFormat format = OutputFormat::Json;
    std::string out_path;               // "" = stdout
    std::uint64_t seed = 0;             // synth: nonzero overrides the spec file's seed
    std::vector<std::string> exclude;   // list ids left out of fits (still scored)
    std::string basis = "n1";           // score-vs-size model: "n1" | "n-sqrt-1"
    bool renormalize = false;           // score: add d_ren and rank by it
    std::int64_t window_min = 0;        // dispersion: size window (required flag)
    std::int64_t window_max = 0;
    double width = 10.0;                // dispersion: score interval length
    double sim_threshold = 0.999;       // dedupe: near-duplicate cutoff
    double cont_threshold = 0.999;      // dedupe: containment cutoff
    double flag_threshold = 1.25;       // heaping: digit-index flag cutoff
    std::vector<std::int64_t> probes = {1000, 10000, 100000, 1000000}; // bias
    std::string points_out;             // bias: extra plot-ready CSV path
    std::string spec_path;              // synth: generator spec file
    std::string out_dir;                // synth: destination directory

    bool operator==(const RunConfig&) const = default;
};

/// Compact JSON form of a config; embedded verbatim in every report.
/// parse_config(serialize_config(c)) == c for any valid config.
std::string serialize_config(const RunConfig& config);
RunConfig parse_config(std::string_view text);

/// Runs one already-parsed command, writing the report to `out` (or to
/// config.out_path when set). Throws tvaudit errors on failure.
void run_command(const RunConfig& config, std::ostream& out);

/// argv front end. Returns the exit code: 0 success, 1 usage error,
/// 2 ingestion error, 3 numeric/fit error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tvaudit
