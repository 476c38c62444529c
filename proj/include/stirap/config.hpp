#pragma once

// Run configuration: defaults, a TOML-style key = value file (or a JSON
// manifest from a previous run), and command-line overrides.
//
// Frequencies take an explicit "MHz" or "kHz" suffix, times "us", "ms" or
// "tau" (multiples of the pulse width), interaction strengths
// "MHz cm^3" / "kHz cm^3". Values are stored in rad/us and us.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stirap/integrator.hpp"
#include "stirap/model.hpp"

namespace stirap {

struct CptAxisSpec {
  double ratio_min = 0.0;
  double ratio_max = 10.0;
  std::size_t points = 201;
};

struct MapSpec {
  double ratio_min = 0.01;
  double ratio_max = 3.0;
  std::size_t ratio_points = 200;
  double detuning_min = -1.5;  // delta1 / omega1
  double detuning_max = 1.5;
  std::size_t detuning_points = 200;
  bool include_loss = false;
};

struct SweepSpec {
  double delta1_gamma_min = -3.0;  // delta1 / gamma_b
  double delta1_gamma_max = 1.0;
  std::size_t delta1_points = 41;
  std::vector<double> t1_values;  // absolute times; empty = {3.0, 3.77, 4.5} tau
};

struct OptimizeSpec {
  double delta1_gamma_min = -3.0;
  double delta1_gamma_max = 0.0;
  double delay_min = 0.0;  // absolute; 0 with delay_max 0 = {0.5, 2.0} tau
  double delay_max = 0.0;
  std::size_t budget = 100;
};

struct RunConfig {
  std::string command;
  SystemParams params;
  double t_start = 0.0;
  std::optional<double> t_end;  // default t1 + 4 tau
  EvolveOptions evolve;
  unsigned threads = 1;
  std::filesystem::path out_dir = ".";
  CptAxisSpec cpt;
  MapSpec map;
  SweepSpec sweep;
  OptimizeSpec optimize;
  /// evolve only: also run gamma_b / 100 (delta1 scaled alike) and record both.
  bool compare_gamma_scales = false;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Reads a config file into raw key/value pairs. Files ending in ".json" are
/// read as flat objects (manifest re-ingestion); anything else as key = value
/// lines with optional [section] headers that prefix keys ("section.key").
KeyValues read_config_file(const std::filesystem::path& path);

/// Resolves defaults <- file <- flags. Within one layer, conflicting forms of
/// the same quantity (delta1 vs delta1_gamma_b, lambda_* vs density/u_*) are
/// an error; a later layer replaces either form from an earlier one.
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const KeyValues& flags);

/// Flat key -> value record of every resolved parameter, in a form that
/// parse_config reads back to an identical RunConfig.
std::map<std::string, std::string> resolved_parameters(const RunConfig& config);

/// Parses "<number> <unit>" for a frequency; exposed for tests.
double parse_frequency(const std::string& field, const std::string& text);

}  // namespace stirap
