#include "nls/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

// Loads cfg when a path was given, otherwise keeps the supplied defaults.
nls::RunConfig load_or_default(const std::string& path, const nls::RunConfig& defaults,
                               bool* weight_key_present) {
  if (path.empty()) return defaults;
  return nls::parse_config_file(path, weight_key_present);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal level-set front propagation"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir, check_name;

  CLI::App* run = app.add_subcommand("run", "evolve a configured initial front");
  run->add_option("--config", cfg_path, "INI config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides [output] dir)");

  CLI::App* check = app.add_subcommand("check", "run a named property check");
  std::string names;
  for (const auto& n : nls::check_names()) names += (names.empty() ? "" : ", ") + n;
  check->add_option("name", check_name, "one of: " + names)->required();
  check->add_option("--config", cfg_path, "INI config file (velocity/time sections are used)");
  check->add_option("--out", out_dir, "output directory for the report");

  CLI::App* demo_rect = app.add_subcommand("demo-rectangle", "exponential side growth reference");
  demo_rect->add_option("--config", cfg_path, "INI config file");
  demo_rect->add_option("--out", out_dir, "output directory");

  CLI::App* demo_tomo = app.add_subcommand("demo-tomo", "noisy phantom reconstruction demo");
  demo_tomo->add_option("--config", cfg_path, "INI config file");
  demo_tomo->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    bool weight_key = false;
    if (run->parsed()) {
      nls::RunConfig cfg = nls::parse_config_file(cfg_path, &weight_key);
      return nls::run_simulation(cfg, out_dir, weight_key);
    }
    if (check->parsed()) {
      nls::RunConfig cfg = load_or_default(cfg_path, nls::RunConfig{}, nullptr);
      if (out_dir.empty() && cfg_path.empty()) out_dir = "out/checks";
      return nls::run_check(check_name, cfg, out_dir);
    }
    if (demo_rect->parsed()) {
      nls::RunConfig cfg = load_or_default(cfg_path, nls::demo_rectangle_config(), nullptr);
      return nls::run_demo_rectangle(cfg, out_dir);
    }
    nls::RunConfig cfg = load_or_default(cfg_path, nls::demo_tomo_config(), nullptr);
    return nls::run_demo_tomo(cfg, out_dir);
  } catch (const nls::ConfigParseError& e) {
    std::cerr << e.what() << "\n";
    return nls::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
