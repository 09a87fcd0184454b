#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lsg {

struct GridSpec {
  int n = 512;
  double half_width = 12.0;
};

struct RunConfig {
  std::string group = "A1";  // root-system name or euclid:<n>
  GridSpec grid;
  std::optional<GridSpec> spectral_grid;
  std::vector<double> times{1.0};
  bool times_given = false;
  std::string init = "gaussian:a=1";
  std::uint64_t seed = 42;
  std::map<std::string, double> tolerances{{"crit", 0.02}, {"fit_floor", 1e-10}, {"fit_cap", 1e-2}};
  std::string output;  // empty: no artifact file
  std::string format = "csv";
  std::string method = "closed";
  std::string mode = "scaled";
  std::string action;                        // sub-action, e.g. "roundtrip"
  std::map<std::string, std::string> params; // command parameters (lambda, t0, p, ...)
};

/// Parses flat "key = value" text with '#' comments.
RunConfig parse_config(std::string_view text);

/// Applies one key/value pair with the same validation as parse_config.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Canonical key = value rendering (stable order), used for the record echo.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

struct ResultRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, double>> results;
  std::map<std::string, double> tolerances;  // keyed by result name
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<std::string> artifacts;
  double duration_seconds = 0.0;  // reported on stderr only
  int exit_status = 0;            // nonzero when a checked invariant failed

  /// One JSON object on a single line; the duration is not included.
  std::string to_json_line() const;
};

/// Dispatches one of: rootsys, spherical, evolve, hardy-check, decay-fit,
/// strichartz, heisenberg, reproduce.
ResultRecord run(std::string_view command, const RunConfig& config);

/// Shortest round-trip decimal form used in every text output.
std::string format_number(double x);

}  // namespace lsg
