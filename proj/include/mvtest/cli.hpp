#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvtest/simlab.hpp"
#include "mvtest/table_io.hpp"

namespace mvtest {

// Everything a fully-parsed command line pins down.
struct RunConfig {
  enum class Mode { Simulate, Analyze };

  Mode mode = Mode::Simulate;

  // simulate: exactly one source of scenarios
  std::string preset;
  std::string config_path;

  // analyze
  std::string input_path;
  std::string group_column = "group";

  std::uint64_t seed = 0;
  bool seed_given = false;   // --seed or MVTEST_SEED present
  int reps = 0;              // 0 = use preset/config default
  double alpha = 0.05;
  Convention convention = Convention::Software;
  GroupTreatment treatment = GroupTreatment::Categorical;
  int workers = 1;

  std::string output_path;   // empty = stdout
  OutputFormat format = OutputFormat::Pretty;
  bool format_given = false; // otherwise inferred from output extension
};

// --help and subcommand help land here instead of UsageError; the caller
// prints text to stdout and exits 0.
struct HelpRequested {
  std::string text;
};

// Parse argv (without the program name). Throws UsageError on bad usage and
// HelpRequested for -h/--help. Reads MVTEST_SEED when --seed is absent.
RunConfig parse_args(const std::vector<std::string>& args);

// Load scenarios from a JSON config file (see README for the schema).
// CLI-level seed/reps settings override the file's values when given.
std::vector<ScenarioConfig> load_config_scenarios(const std::string& path, const RunConfig& cfg);

// Execute a parsed command: results to `out` (or cfg.output_path), all
// diagnostics to `err`. Returns the process exit code.
int run_cli(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full entry point used by main(): parse + run + map errors to exit codes
// (0 success, 1 runtime failure, 2 usage).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvtest
