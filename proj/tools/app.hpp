#pragma once

// Command-line front end, kept in a library so the tests can drive it
// in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtwin/harness.hpp"

namespace dtwin::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Everything a config file can set. Unset keys keep the library defaults.
struct FileConfig {
  BenchmarkConfig benchmark{};
  std::string output_dir = "results";
  // GA methods normally insist on the standard population size.
  bool allow_population_override = false;
};

// Strict parsing: unknown keys, wrong types and out-of-range values throw
// ConfigError.
[[nodiscard]] FileConfig parse_config(const nlohmann::ordered_json& doc);
[[nodiscard]] FileConfig load_config(const std::string& path);

// Throws ConfigError if a GA method among `methods` would run with a
// non-standard population that was not explicitly allowed.
void check_population(const FileConfig& cfg, const std::vector<Method>& methods);

// Full configuration with every default spelled out.
[[nodiscard]] nlohmann::ordered_json to_json(const FileConfig& cfg);

// Shortest round-trip decimal form; identical input gives identical text.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] std::string records_csv(const std::vector<RecordSeries>& series);
[[nodiscard]] std::string trace_csv(const std::vector<RecordSeries>& series, Method m);
[[nodiscard]] nlohmann::ordered_json summary_json(const FileConfig& cfg, const BenchmarkResult& r);

// argv-style entry point. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dtwin::app
