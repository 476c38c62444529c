#pragma once

// CSV and manifest output, and the subcommand dispatcher behind the CLI.
//
// All CSVs carry a header row and serialise numbers with 12 significant
// digits. Frequencies are in rad/us (MHz-numerically), times in us.

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include "stirap/config.hpp"
#include "stirap/integrator.hpp"
#include "stirap/stability.hpp"
#include "stirap/sweep.hpp"

namespace stirap {

inline constexpr const char* kToolVersion = "1.0.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int numeric_failure = 3;
}  // namespace exit_code

/// t, t_over_tau, re_a, im_a, re_b, im_b, re_g, im_g, pop_a, pop_b, pop_g,
/// norm, omega1, omega2, delta, cpt_pop_a, cpt_pop_g
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const PulsePair& pulses);

/// omega2_over_omega1, delta1_over_omega1, max_growth_rate, unstable
void write_stability_csv(std::ostream& out, const StabilityMap& map);

/// delta1, t1, eta, status
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

/// ratio, pop_a, pop_g, delta, mu_a
void write_cpt_csv(std::ostream& out, const SystemParams& params, const std::vector<double>& ratios);

/// Flat JSON object: resolved parameters, then "meta.*" and "result.*" entries.
void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const std::map<std::string, std::string>& meta,
                    const std::map<std::string, std::string>& results);

/// Runs config.command ("evolve", "cpt", "stability-map", "sweep",
/// "optimize") and writes its CSV plus manifest.json into config.out_dir.
/// Returns an exit_code value; diagnostics go to `diag`.
int run(const RunConfig& config, std::ostream& diag);

/// Headline window of the evolve run: eta = 0.92 +- 0.04.
inline constexpr double kHeadlineEta = 0.92;
inline constexpr double kHeadlineEtaTolerance = 0.04;

}  // namespace stirap
