#pragma once

#include "kicktop/experiments.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kicktop {

inline constexpr char kVersion[] = "0.1.0";

enum class Command { fig1, fig2, entropy, probe };

// One CLI invocation. Defaults are the stock experiment settings:
// j = 18, kick 3, quarter-turn rotation, 15 periods, 500 sweep points.
struct RunConfig {
  Command command = Command::fig1;
  double j = 18.0;
  double kick_strength = 3.0;
  double rotation_angle = std::numbers::pi / 2.0;
  int depth = 15;  // record length N
  double theta = 0.0;
  double phi = 0.0;
  int n_points = 500;
  std::uint64_t seed = 0;
  double prune_eps = 0.0;
  int workers = 1;
  std::string history;  // probe only, e.g. "+-+"
  std::string output_dir = ".";
};

// Outcome of argument parsing. `config` is set on success; otherwise
// `message` carries the help text (exit_code 0) or the diagnostic
// (exit_code != 0).
struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = 0;
  std::string message;
};

// Parses command-line arguments (program name excluded). Option values may
// also come from a flat key=value file via --config; explicit flags take
// precedence, unknown keys are errors.
ParseResult parse_config(const std::vector<std::string>& args);

// Executes one command: writes the CSV outputs and a manifest into the
// configured output directory and returns the process exit status.
int run(const RunConfig& config);

// parse + run + diagnostics; the main() body.
int run_cli(int argc, const char* const* argv);

// Manifest text: flat key=value config echo that can be fed back through
// --config, with provenance (version, RNG, timing, pruned mass) in
// comment lines.
std::string format_manifest(const RunConfig& config, double duration_seconds,
                            double pruned_mass_total, const std::vector<std::string>& outputs);

std::string command_name(Command command);

}  // namespace kicktop
