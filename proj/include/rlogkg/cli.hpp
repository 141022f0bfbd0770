#pragma once

// Command-line front end: configuration, dispatch and file output.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlogkg/analysis.hpp"
#include "rlogkg/problems.hpp"
#include "rlogkg/schemes.hpp"

namespace rlogkg::cli {

enum class Command { Evolve, StudyEpsilon, StudyDiscretization, StudyTotal, StabilityCheck };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command c) noexcept;
std::string_view to_string(OutputFormat f) noexcept;

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStability = 3;
inline constexpr int kExitOverflow = 4;

/// Fully resolved configuration: every field holds the value that will be used.
struct RunConfig {
    Command command = Command::Evolve;
    ProblemName problem = ProblemName::Example1;
    Scheme scheme = Scheme::EFD;
    double epsilon = 1e-3;
    double lambda = 1.0;
    double a = -16.0;
    double b = 16.0;
    std::size_t n_points = 4096;
    double tau = 0.01 / 128.0;
    double final_time = 1.0;
    int levels = 6;
    std::string output_path;  ///< empty: studies write to standard output
    OutputFormat output_format = OutputFormat::Csv;
    bool force = false;
    std::vector<double> snapshot_times;

    std::vector<double> eps_list;  ///< epsilon and total studies
    DiscretizationMode mode = DiscretizationMode::TemporalSpatial;
    int first_level = 1;
    ReferenceResolution reference;
    ReferenceQuality reference_quality = ReferenceQuality::FineGrid;
    std::size_t energy_stride = 0;  ///< 0 disables energy output
    bool record_timing = false;

    double spacing() const { return (b - a) / static_cast<double>(n_points); }
};

/// Bad flag or invalid value. The message names the offending flag.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Help was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses argv (without the program name). Precedence: flags, then the
/// --config file (TOML/INI, unknown keys rejected), then per-command defaults.
RunConfig parse_config(const std::vector<std::string>& args);

/// Checks every field against the library preconditions. Throws ConfigError.
void validate(const RunConfig& config);

/// Runs the configured command. Data goes to files or `out`, diagnostics to `err`.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + execute with exit-code mapping.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double v);

/// Two decimals, as convergence rates are tabulated.
std::string format_rate(double v);

inline constexpr std::string_view kTableCsvHeader =
    "level,h,tau,epsilon,err_l2,err_linf,err_h1,rate_l2,rate_linf,rate_h1";

/// All rows of all tables under the fixed header.
std::string tables_to_csv(const std::vector<ConvergenceTable>& tables);

/// `x,u` per grid point.
std::string snapshot_to_csv(const Grid1D& grid, const Field& u);

/// `<prefix>_t<time>.csv`
std::filesystem::path snapshot_path(const std::string& prefix, double time);

/// Writes to a sibling temporary file then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rlogkg::cli
