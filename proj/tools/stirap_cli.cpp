// stirap: command-line driver for the atom-molecule STIRAP simulator.
//
//   stirap evolve         --out DIR [--compare-gamma-scales]
//   stirap cpt            --out DIR
//   stirap stability-map  --out DIR --threads N
//   stirap sweep          --out DIR --threads N
//   stirap optimize       --out DIR --threads N
//
// Common options may appear before or after the subcommand.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stirap/config.hpp"
#include "stirap/errors.hpp"
#include "stirap/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mean-field STIRAP simulator for atom-molecule condensates"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::vector<std::string> sets;
  stirap::KeyValues flags;

  app.add_option("--config", config_path, "TOML-style config file or a manifest.json to re-run");
  app.add_option("--set", sets, "Override any config key, KEY=VALUE (repeatable)");

  struct Override {
    const char* flag;
    const char* key;
    const char* help;
  };
  const Override overrides[] = {
      {"--out", "out", "Output directory"},
      {"--threads", "threads", "Cap on parallel cells for map/sweep/optimize (0 = all cores)"},
      {"--delta1", "delta1", "Free-bound detuning, e.g. '-103.6 MHz' or '-1.4 gamma_b'"},
      {"--delta1-gamma-b", "delta1_gamma_b", "Free-bound detuning as a multiple of gamma_b"},
      {"--t1", "t1", "Free-bound pulse centre, e.g. '3.77 tau' or '9 ms'"},
      {"--t2", "t2", "Bound-bound pulse centre"},
      {"--gamma-b", "gamma_b", "Excited-molecule decay rate, e.g. '74 MHz'"},
      {"--omega0", "omega0", "Peak Rabi frequency, e.g. '2.1 MHz'"},
      {"--tau", "tau", "Pulse width in us or ms (default 5e3 / omega0)"},
      {"--reltol", "reltol", "Relative integration tolerance"},
      {"--abstol", "abstol", "Absolute integration tolerance"},
  };
  std::vector<std::optional<std::string>> values(std::size(overrides));
  for (std::size_t i = 0; i < std::size(overrides); ++i) {
    app.add_option(overrides[i].flag, values[i], overrides[i].help);
  }

  bool compare_gamma = false;
  auto* evolve = app.add_subcommand("evolve", "Integrate one pulse sequence -> trajectory.csv");
  evolve->add_flag("--compare-gamma-scales", compare_gamma,
                   "Also run with gamma_b and delta1 scaled by 1/100 and record both efficiencies");
  app.add_subcommand("cpt", "Dark-state populations vs W1/W2 -> cpt.csv");
  app.add_subcommand("stability-map", "Dark-state instability map -> stability_map.csv");
  app.add_subcommand("sweep", "Efficiency over delta1 and t1 -> sweep.csv");
  app.add_subcommand("optimize", "Grid search plus local refinement -> optimize.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : stirap::exit_code::config_error;
  }

  for (std::size_t i = 0; i < std::size(overrides); ++i) {
    if (values[i]) flags.emplace_back(overrides[i].key, *values[i]);
  }
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "config error: --set expects KEY=VALUE, got '" << s << "'\n";
      return stirap::exit_code::config_error;
    }
    flags.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (compare_gamma) flags.emplace_back("evolve.compare_gamma_scales", "true");

  stirap::RunConfig config;
  try {
    config = stirap::parse_config(config_path ? std::optional<std::filesystem::path>(*config_path)
                                              : std::nullopt,
                                  flags);
  } catch (const stirap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return stirap::exit_code::config_error;
  }
  config.command = app.get_subcommands().front()->get_name();

  const int rc = stirap::run(config, std::cerr);
  if (rc == stirap::exit_code::ok) {
    std::cout << "wrote " << (config.out_dir / "manifest.json").string() << '\n';
  }
  return rc;
}
