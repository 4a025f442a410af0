#pragma once

// Persistence for studies: JSON run configuration, CSV error tables, the JSON
// run manifest and gnuplot data files.
//
// CSV columns: h, strong_error, strong_halfwidth, strong_order_pairwise,
// weak_error, weak_halfwidth, weak_order_pairwise, aborts. Numbers are
// written with 17 significant digits so a parse reproduces them exactly;
// undefined orders (first row) are left empty.

#include "sacfem/harness.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sacfem {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    StudyConfig study = StudyConfig::desk();
    TemporalConfig temporal;
};

/// Desk or paper defaults for both studies.
RunConfig run_config_for_profile(const std::string& profile);

/// Parses a JSON config. The profile named in the file (or `profile_override`,
/// which wins) supplies defaults; every other key overrides them. Unknown keys
/// and ill-typed values raise ConfigError.
RunConfig parse_run_config(std::string_view json_text, const std::optional<std::string>& profile_override = {});
/// Reads and parses a config file; unreadable files raise IoError.
RunConfig load_run_config(const std::filesystem::path& file,
                          const std::optional<std::string>& profile_override = {});
std::string run_config_json(const RunConfig& cfg);

std::string format_csv(const ErrorReport& report);
/// Inverse of format_csv; fits are recomputed from the parsed errors.
ErrorReport parse_csv(std::string_view text);
std::string format_temporal_csv(const TemporalReport& report);

std::string report_json(const ErrorReport& report);
std::string temporal_report_json(const TemporalReport& report);

struct ManifestInfo {
    std::string command;
    std::string config_json;   // full configuration
    std::string results_json;  // report summary
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    double wall_seconds = 0.0;
};

/// Run manifest with "schema": 1, seed, versions and wall time.
std::string manifest_json(const ManifestInfo& info);

/// log-log data: h strong_error strong_halfwidth weak_error weak_halfwidth.
std::string format_gnuplot(const ErrorReport& report);

/// Writes text to file, creating parent directories; raises IoError with the path.
void write_text(const std::filesystem::path& file, std::string_view text);
std::string read_text(const std::filesystem::path& file);

/// Library version string.
std::string version();

}  // namespace sacfem
