#include "kicktop/cli_io.hpp"

#include "kicktop/text_format.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace kicktop {

namespace fs = std::filesystem;

namespace {

CLI::Validator half_integer_validator() {
  return CLI::Validator(
      [](std::string& input) -> std::string {
        double value = 0.0;
        try {
          value = std::stod(input);
        } catch (...) {
          return "'" + input + "' is not a number";
        }
        if (!is_half_integer_spin(value)) {
          return "j must be a half-integer >= 1/2 (2j integral), got " + input;
        }
        return {};
      },
      "HALFINT", "half-integer spin");
}

CLI::Validator history_validator() {
  return CLI::Validator(
      [](std::string& input) -> std::string {
        if (input.empty()) return "history must not be empty";
        for (const char c : input) {
          if (c != '+' && c != '-') return "history may contain only '+' and '-' characters";
        }
        return {};
      },
      "HISTORY", "+/- outcome string");
}

// Everything the parser needs to keep alive while querying results.
struct CliApp {
  std::unique_ptr<CLI::App> app;
  std::vector<std::pair<CLI::App*, Command>> commands;
  std::vector<CLI::Option*> out_options;
  std::string config_path;

  CLI::App* active() const {
    for (const auto& [sub, command] : commands) {
      if (sub->parsed()) return sub;
    }
    return nullptr;
  }
};

void add_shared_options(CliApp& cli, CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--config", cli.config_path,
                  "read options from a flat key=value file; explicit flags take precedence")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--j", cfg.j, "angular momentum quantum number (half-integer >= 1/2)")
      ->check(half_integer_validator())
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  cmd->add_option("--kick", cfg.kick_strength, "kick strength")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  cmd->add_option("--rotation", cfg.rotation_angle, "rotation angle in radians")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  cmd->add_option("--N", cfg.depth, "number of kick+measurement periods")
      ->check(CLI::Range(1, 63))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  cmd->add_option("--prune-eps", cfg.prune_eps,
                  "drop branches with squared norm below this (0 keeps everything)")
      ->check(CLI::NonNegativeNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  cmd->add_option("--workers", cfg.workers, "worker threads for independent per-point work")
      ->check(CLI::PositiveNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  cli.out_options.push_back(
      cmd->add_option("--out", cfg.output_dir, "output directory (env: KICKTOP_OUTPUT_DIR)")
          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
          ->capture_default_str());
}

void add_angle_options(CLI::App* cmd, RunConfig& cfg, bool enforce_required) {
  cmd->add_option("--theta", cfg.theta, "coherent state polar parameter in radians")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->required(enforce_required);
  cmd->add_option("--phi", cfg.phi, "coherent state azimuthal parameter in radians")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->required(enforce_required);
}

CliApp build_cli(RunConfig& cfg, bool enforce_required) {
  CliApp cli;
  cli.app = std::make_unique<CLI::App>("kicked-top measurement-record entropy toolkit");
  CLI::App& app = *cli.app;
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CLI::App* fig1 = app.add_subcommand(
      "fig1", "entropy growth for the stock regular and chaotic initial states");
  add_shared_options(cli, fig1, cfg);
  cli.commands.emplace_back(fig1, Command::fig1);

  CLI::App* fig2 = app.add_subcommand(
      "fig2", "entropy rate sweep over random initial states in the x>0, y>0, z<0 octant");
  add_shared_options(cli, fig2, cfg);
  fig2->add_option("--n-points", cfg.n_points, "number of sampled initial states")
      ->check(CLI::PositiveNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  fig2->add_option("--seed", cfg.seed, "sampling seed")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->capture_default_str();
  cli.commands.emplace_back(fig2, Command::fig2);

  CLI::App* entropy =
      app.add_subcommand("entropy", "entropy series for one coherent initial state");
  add_shared_options(cli, entropy, cfg);
  add_angle_options(entropy, cfg, enforce_required);
  cli.commands.emplace_back(entropy, Command::entropy);

  CLI::App* probe =
      app.add_subcommand("probe", "probability of one explicit measurement history");
  add_shared_options(cli, probe, cfg);
  add_angle_options(probe, cfg, enforce_required);
  probe
      ->add_option("--history", cfg.history,
                   "outcome string such as +-+ (use --history=-.. if it starts with -)")
      ->check(history_validator())
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->required(enforce_required);
  cli.commands.emplace_back(probe, Command::probe);
  return cli;
}

// Flat key=value config format: one pair per line, blank lines and lines
// starting with # or ; are ignored.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw std::runtime_error("cannot read config file " + path);
  }
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path);
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int line_number = 0;
  const auto trim = [](std::string text) {
    const auto begin = text.find_first_not_of(" \t\r");
    const auto end = text.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string() : text.substr(begin, end - begin + 1);
  };
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#' || trimmed[0] == ';') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config file " + path + " line " + std::to_string(line_number) +
                               ": expected key=value");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config file " + path + " line " + std::to_string(line_number) +
                               ": empty key");
    }
    if (key == "config") {
      throw std::runtime_error("config file " + path + " may not set 'config'");
    }
    pairs.emplace_back(key, value);
  }
  return pairs;
}

template <typename Body>
void write_file(const fs::path& path, Body&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

void write_fig1_csv(std::ostream& out, const Fig1Result& result) {
  out << "n,H_n_R,H_n_C\n";
  for (std::size_t i = 0; i < result.series_regular.values.size(); ++i) {
    out << (i + 1) << ',' << g17(result.series_regular.values[i]) << ','
        << g17(result.series_chaotic.values[i]) << '\n';
  }
}

void write_fig2_csv(std::ostream& out, const SweepResult& result) {
  out << "index,x,y,z,theta,phi,angle,r_tilde\n";
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const SweepRecord& r = result.records[i];
    out << i << ',' << g17(r.point.x) << ',' << g17(r.point.y) << ',' << g17(r.point.z) << ','
        << g17(r.theta) << ',' << g17(r.phi) << ',' << g17(r.angle_from_fixed_point) << ','
        << g17(r.r_tilde) << '\n';
  }
}

void write_summary(std::ostream& out, const SweepResult& result) {
  out << "n_points=" << result.n_points << '\n';
  out << "seed=" << result.seed << '\n';
  for (std::size_t bin = 0; bin < 4; ++bin) {
    out << "quartile_" << (bin + 1) << "_mean_r_tilde=" << g17(result.quartile_means[bin]) << '\n';
  }
  out << "rank_correlation=" << g17(result.rank_correlation) << '\n';
  double lo = 1.0, hi = 0.0;
  for (const SweepRecord& r : result.records) {
    lo = std::min(lo, r.r_tilde);
    hi = std::max(hi, r.r_tilde);
  }
  out << "min_r_tilde=" << g17(lo) << '\n';
  out << "max_r_tilde=" << g17(hi) << '\n';
  out << "bound_weakest=" << rate_lower_bound_report({lo, result.n_points}).statement << '\n';
  out << "bound_strongest=" << rate_lower_bound_report({hi, result.n_points}).statement << '\n';
}

}  // namespace

std::string command_name(Command command) {
  switch (command) {
    case Command::fig1: return "fig1";
    case Command::fig2: return "fig2";
    case Command::entropy: return "entropy";
    case Command::probe: return "probe";
  }
  return "unknown";
}

namespace {

// args through CLI11; returns nullopt and fills `result` on help/error
bool parse_into(CliApp& cli, const std::vector<std::string>& args, ParseResult& result) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("kicktop");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    cli.app->parse(static_cast<int>(argv.size()), argv.data());
    return true;
  } catch (const CLI::CallForHelp&) {
    const auto subs = cli.app->get_subcommands();
    result = {std::nullopt, 0, subs.empty() ? cli.app->help() : subs.front()->help()};
  } catch (const CLI::CallForAllHelp&) {
    result = {std::nullopt, 0, cli.app->help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion&) {
    result = {std::nullopt, 0, std::string(kVersion)};
  } catch (const CLI::ParseError& e) {
    const int code = e.get_exit_code();
    result = {std::nullopt, code == 0 ? 1 : code, std::string("error: ") + e.what()};
  }
  return false;
}

}  // namespace

ParseResult parse_config(const std::vector<std::string>& args) {
  // discovery pass: find the subcommand and a config file without
  // enforcing required options (the file may supply them)
  RunConfig probe_cfg;
  CliApp discovery = build_cli(probe_cfg, false);
  ParseResult failure;
  if (!parse_into(discovery, args, failure)) return failure;

  CLI::App* active = discovery.active();
  bool out_on_command_line = false;
  for (const CLI::Option* opt : discovery.out_options) {
    if (opt->count() > 0) out_on_command_line = true;
  }

  // splice config-file values in front of the explicit flags; TakeLast
  // makes the flags win
  std::vector<std::string> final_args = args;
  if (!discovery.config_path.empty()) {
    std::vector<std::pair<std::string, std::string>> pairs;
    try {
      pairs = read_flat_config(discovery.config_path);
    } catch (const std::exception& e) {
      return {std::nullopt, 1, std::string("error: ") + e.what()};
    }
    for (const auto& [key, value] : pairs) {
      if (active->get_option_no_throw("--" + key) == nullptr) {
        return {std::nullopt, 1,
                "error: config file " + discovery.config_path + ": unknown option '" + key +
                    "' for command " + active->get_name()};
      }
    }
    std::vector<std::string> injected;
    injected.reserve(pairs.size());
    for (const auto& [key, value] : pairs) injected.push_back("--" + key + "=" + value);
    // insert right after the subcommand token
    auto insert_at = final_args.begin();
    for (auto it = final_args.begin(); it != final_args.end(); ++it) {
      if (*it == active->get_name()) {
        insert_at = it + 1;
        break;
      }
    }
    final_args.insert(insert_at, injected.begin(), injected.end());
  }

  RunConfig cfg;
  CliApp cli = build_cli(cfg, true);
  if (!parse_into(cli, final_args, failure)) return failure;

  for (const auto& [sub, command] : cli.commands) {
    if (sub->parsed()) cfg.command = command;
  }
  // env override sits between explicit flags and config-file values
  if (!out_on_command_line) {
    if (const char* env_dir = std::getenv("KICKTOP_OUTPUT_DIR"); env_dir && *env_dir) {
      cfg.output_dir = env_dir;
    }
  }
  return {cfg, 0, ""};
}

std::string format_manifest(const RunConfig& config, double duration_seconds,
                            double pruned_mass_total, const std::vector<std::string>& outputs) {
  std::ostringstream out;
  const std::string name = command_name(config.command);
  out << "# kicktop " << name << " manifest; feed back via: kicktop " << name
      << " --config <this file>\n";
  out << "# version=" << kVersion << '\n';
  out << "# rng=" << kRngAlgorithm << '\n';
  out << "# duration_seconds=" << g17(duration_seconds) << '\n';
  out << "# pruned_mass_total=" << g17(pruned_mass_total) << '\n';
  out << "# outputs=";
  for (std::size_t i = 0; i < outputs.size(); ++i) out << (i ? "," : "") << outputs[i];
  out << '\n';
  out << "j=" << g17(config.j) << '\n';
  out << "kick=" << g17(config.kick_strength) << '\n';
  out << "rotation=" << g17(config.rotation_angle) << '\n';
  out << "N=" << config.depth << '\n';
  out << "prune-eps=" << g17(config.prune_eps) << '\n';
  out << "workers=" << config.workers << '\n';
  out << "out=" << config.output_dir << '\n';
  if (config.command == Command::fig2) {
    out << "n-points=" << config.n_points << '\n';
    out << "seed=" << config.seed << '\n';
  }
  if (config.command == Command::entropy || config.command == Command::probe) {
    out << "theta=" << g17(config.theta) << '\n';
    out << "phi=" << g17(config.phi) << '\n';
  }
  if (config.command == Command::probe) {
    out << "history=" << config.history << '\n';
  }
  return out.str();
}

int run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path out_dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                             ec.message());
  }

  std::vector<std::string> outputs;
  double pruned_total = 0.0;

  switch (cfg.command) {
    case Command::fig1: {
      const Fig1Result result =
          run_fig1({cfg.j, cfg.depth, cfg.kick_strength, cfg.rotation_angle, cfg.prune_eps});
      write_file(out_dir / "fig1.csv", [&](std::ostream& os) { write_fig1_csv(os, result); });
      outputs = {"fig1.csv"};
      pruned_total = result.series_regular.pruned_mass.back() +
                     result.series_chaotic.pruned_mass.back();
      const RateEstimate reg = rate_estimate(result.series_regular, RateMethod::endpoint);
      const RateEstimate cha = rate_estimate(result.series_chaotic, RateMethod::endpoint);
      std::cout << "regular state  (theta=" << kRegularTheta << ", phi=" << kRegularPhi
                << "): r_tilde = " << reg.r_tilde;
      if (cfg.depth >= 6) {
        std::cout << ", linearity R^2 = " << linearity_diagnostic(result.series_regular);
      }
      std::cout << '\n';
      std::cout << "chaotic state  (theta=" << kChaoticTheta << ", phi=" << kChaoticPhi
                << "): r_tilde = " << cha.r_tilde;
      if (cfg.depth >= 6) {
        std::cout << ", linearity R^2 = " << linearity_diagnostic(result.series_chaotic);
      }
      std::cout << '\n';
      std::cout << rate_lower_bound_report(reg).statement << " (regular state)\n";
      std::cout << rate_lower_bound_report(cha).statement << " (chaotic state)\n";
      break;
    }
    case Command::fig2: {
      SweepOptions opts;
      opts.n_points = cfg.n_points;
      opts.j = cfg.j;
      opts.depth = cfg.depth;
      opts.seed = cfg.seed;
      opts.kick_strength = cfg.kick_strength;
      opts.rotation_angle = cfg.rotation_angle;
      opts.prune_eps = cfg.prune_eps;
      opts.workers = cfg.workers;
      const SweepResult sweep = run_fig2(opts);
      write_file(out_dir / "fig2.csv", [&](std::ostream& os) { write_fig2_csv(os, sweep); });
      write_file(out_dir / "summary.txt", [&](std::ostream& os) { write_summary(os, sweep); });
      outputs = {"fig2.csv", "summary.txt"};
      pruned_total = sweep.pruned_mass_total;
      std::cout << "sweep of " << sweep.n_points
                << " states: rank correlation (angle vs r_tilde) = " << sweep.rank_correlation
                << '\n';
      std::cout << "quartile means of r_tilde by angle:";
      for (const double mean : sweep.quartile_means) std::cout << ' ' << mean;
      std::cout << '\n';
      break;
    }
    case Command::entropy: {
      const SpinSystem sys = build_spin_system(cfg.j);
      const FloquetOperator u = build_floquet({cfg.j, cfg.kick_strength, cfg.rotation_angle});
      const MeasurementScheme scheme = build_scheme(sys);
      const PureState psi = coherent_state(sys, cfg.theta, cfg.phi);
      const EntropySeries series = entropy_series(psi, u, scheme, cfg.depth, cfg.prune_eps);
      write_file(out_dir / "entropy.csv", [&](std::ostream& os) { write_entropy_csv(os, series); });
      outputs = {"entropy.csv"};
      pruned_total = series.pruned_mass.back();
      const RateEstimate rate = rate_estimate(series, RateMethod::endpoint);
      std::cout << "r_tilde = " << rate.r_tilde << " bits/measurement over " << cfg.depth
                << " periods\n";
      std::cout << rate_lower_bound_report(rate).statement << '\n';
      break;
    }
    case Command::probe: {
      const SpinSystem sys = build_spin_system(cfg.j);
      const FloquetOperator u = build_floquet({cfg.j, cfg.kick_strength, cfg.rotation_angle});
      const MeasurementScheme scheme = build_scheme(sys);
      const PureState psi = coherent_state(sys, cfg.theta, cfg.phi);
      const double p = single_history_probability(psi, u, scheme, parse_history(cfg.history));
      std::cout << "P(" << cfg.history << ") = " << g17(p) << '\n';
      break;
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(out_dir / (command_name(cfg.command) + "_manifest.txt"), [&](std::ostream& os) {
    os << format_manifest(cfg, seconds, pruned_total, outputs);
  });
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const ParseResult parsed = parse_config(args);
  if (!parsed.config) {
    (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message << '\n';
    return parsed.exit_code;
  }
  try {
    return run(*parsed.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace kicktop
