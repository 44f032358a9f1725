#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace anisopt {

enum class Subcommand { SolveState, SolveHammerstein, Optimize, Sweep, CheckInequalities };

Subcommand parse_subcommand(const std::string& name);
std::string subcommand_name(Subcommand sub);

/// Fully resolved and validated run configuration. Values come from
/// defaults, then the config file, then key=value overrides. Unknown or
/// duplicate keys and out-of-range values are rejected before anything is
/// written.
struct RunConfig {
  Subcommand subcommand = Subcommand::SolveState;
  std::filesystem::path out_dir;
  unsigned long long seed = 42;

  int dim = 1;
  int n = 32;
  double p = 2.0;
  double f_value = 1.0;
  double tol = 1e-10;
  int max_iter = 500;

  double xi1 = 0.5, xi2 = 2.0, alpha = 0.5, gamma = 10.0;
  double eps = 1e-3, k = 8.0, delta = 0.15;

  std::string control_scheme = "identity";
  std::vector<double> control_theta;

  std::string kernel_id = "gaussian";
  double kernel_c = -1.0;  // <= 0 selects the normalized gaussian scale
  double kernel_sigma = 0.25;

  int sweep_steps = 6;
  std::string sweep_mode = "state";  // state | coupled | value

  std::string opt_method = "nelder-mead";
  int opt_budget = 200;
  double opt_tv_penalty = 1e3;

  std::string zd_mode = "self-target";  // self-target | constant
  std::vector<double> zd_theta;
  double zd_value = 0.0;
  int grid_points = 16;

  std::map<std::string, std::string> echo;  // canonical key=value echo
};

/// Parse and validate; `overrides` entries have the form key=value.
RunConfig parse_config(Subcommand sub, const std::optional<std::filesystem::path>& config_file,
                       const std::vector<std::string>& overrides,
                       const std::filesystem::path& out_dir);

/// One line per configuration key with its default, for --help output.
std::string config_key_help();

struct RunManifest {
  bool ok = false;
  std::string manifest_path;
  std::vector<std::string> outputs;  // files written (relative to out_dir)
  std::string input_hash;
  double wall_seconds = 0.0;
};

/// Dispatch to the module entry point, write outputs atomically into
/// config.out_dir (CSV artifacts plus manifest.json), and report whether
/// every asserted invariant of the run passed.
RunManifest run(const RunConfig& config);

}  // namespace anisopt
