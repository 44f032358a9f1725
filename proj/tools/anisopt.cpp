#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anisopt/runner.hpp"
#include "json.hpp"

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void attach_common(CLI::App* app, CommonOptions& opts, const std::string& default_out) {
  app->add_option("-c,--config", opts.config_file, "configuration file (key = value lines)");
  app->add_option("-s,--set", opts.overrides, "override a configuration key (key=value)");
  app->add_option("-o,--out", opts.out_dir, "output directory")->default_val(default_out);
  app->footer(anisopt::config_key_help());
}

int dispatch(anisopt::Subcommand sub, const CommonOptions& opts) {
  std::optional<std::filesystem::path> config_path;
  if (!opts.config_file.empty()) config_path = opts.config_file;
  const anisopt::RunConfig config =
      anisopt::parse_config(sub, config_path, opts.overrides, opts.out_dir);
  const anisopt::RunManifest manifest = anisopt::run(config);
  std::printf("%s: %s (%zu files in %s, %.2fs)\n", anisopt::subcommand_name(sub).c_str(),
              manifest.ok ? "ok" : "FAILED", manifest.outputs.size(),
              config.out_dir.string().c_str(), manifest.wall_seconds);
  return manifest.ok ? 0 : 1;
}

void print_error(const std::string& type, const std::string& message) {
  const nlohmann::json record{{"error", {{"type", type}, {"message", message}}}};
  std::fprintf(stderr, "%s\n", record.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisopt: anisotropic p-Laplacian / Hammerstein control experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, anisopt::Subcommand>> subs = {
      {"solve-state", anisopt::Subcommand::SolveState},
      {"solve-hammerstein", anisopt::Subcommand::SolveHammerstein},
      {"optimize", anisopt::Subcommand::Optimize},
      {"sweep", anisopt::Subcommand::Sweep},
      {"check-inequalities", anisopt::Subcommand::CheckInequalities},
  };

  std::vector<CommonOptions> options(subs.size());
  std::vector<CLI::App*> apps;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CLI::App* sub = app.add_subcommand(subs[i].first, "run the " + subs[i].first + " experiment");
    attach_common(sub, options[i], "out-" + subs[i].first);
    apps.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!apps[i]->parsed()) continue;
    try {
      return dispatch(subs[i].second, options[i]);
    } catch (const std::invalid_argument& err) {
      print_error("validation", err.what());
      return 2;
    } catch (const std::exception& err) {
      print_error("runtime", err.what());
      return 1;
    }
  }
  return 2;
}
