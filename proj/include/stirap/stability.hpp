#pragma once

// Linear stability of the dark state.
//
// In the frame a -> a exp(-i mu t), b, g -> (b, g) exp(-2 i mu t) the dark
// state is a fixed point. Small deviations evolve as dx/dt = J x with J the
// 6x6 real Jacobian over (Re a, Im a, Re b, Im b, Re g, Im g). An eigenvalue
// lambda of J corresponds to the perturbation eigenfrequency omega = i lambda
// (deviations ~ exp(-i omega t)); the state is dynamically unstable when some
// lambda has a positive real part.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "stirap/cpt.hpp"
#include "stirap/model.hpp"

namespace stirap {

using Jacobian = Eigen::Matrix<double, 6, 6>;
using RealState = Eigen::Matrix<double, 6, 1>;

RealState to_real(const StateVector& s);
StateVector from_real(const RealState& x, double t = 0.0);

/// Model right-hand side plus the frame terms +i mu a, +2 i mu b, +2 i mu g.
Derivative rotating_frame_rhs(const StateVector& state, const SystemParams& params, double omega1,
                              double omega2, double delta, double mu_a);

struct LinearizeOptions {
  /// Keep gamma_b in the linearisation. Off by default: the dark-state
  /// analysis is for the lossless system.
  bool include_loss = false;
  double fd_step = 1e-7;
};

/// Central-difference Jacobian of rotating_frame_rhs at the dark state for
/// (omega1, omega2), with delta and mu_a taken from that dark state.
Jacobian linearize_at_cpt(const SystemParams& params, double omega1, double omega2,
                          const LinearizeOptions& options = {});

/// Closed-form Jacobian of rotating_frame_rhs at an arbitrary state.
Jacobian analytic_jacobian(const StateVector& state, const SystemParams& params, double omega1,
                           double omega2, double delta, double mu_a);

/// Closed-form Jacobian at the dark state (counterpart of linearize_at_cpt).
Jacobian analytic_jacobian_at_cpt(const SystemParams& params, double omega1, double omega2,
                                  const LinearizeOptions& options = {});

struct StabilityResult {
  std::array<std::complex<double>, 6> eigenfrequencies{};  // omega = i lambda
  double max_growth_rate = 0.0;                            // max(0, max Re lambda)
  bool unstable = false;
};

/// Growth rates above this fraction of omega0 count as unstable.
inline constexpr double kGrowthThreshold = 1e-6;

/// Eigen-decomposition of linearize_at_cpt. Throws NumericError if the
/// eigensolver does not converge.
StabilityResult classify(const SystemParams& params, double omega1, double omega2,
                         const LinearizeOptions& options = {});

/// Same classification from a caller-supplied Jacobian.
StabilityResult classify_jacobian(const Jacobian& jacobian, double omega0);

struct StabilityMap {
  std::vector<double> ratio_axis;     // omega2 / omega1
  std::vector<double> detuning_axis;  // delta1 / omega1
  /// Row-major over detuning: cells[i * ratio_axis.size() + j] is
  /// (detuning_axis[i], ratio_axis[j]).
  std::vector<StabilityResult> cells;

  const StabilityResult& at(std::size_t detuning_index, std::size_t ratio_index) const {
    return cells[detuning_index * ratio_axis.size() + ratio_index];
  }
};

/// Classifies every grid point with omega1 = params.omega0,
/// omega2 = ratio * omega1 and delta1 = detuning * omega1. Axes must be
/// non-empty and strictly increasing. Cells are computed on up to `threads`
/// workers (0 = hardware concurrency); the result does not depend on it.
StabilityMap stability_map(const SystemParams& params, const std::vector<double>& ratio_axis,
                           const std::vector<double>& detuning_axis, unsigned threads = 1,
                           const LinearizeOptions& options = {});

/// n evenly spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace stirap
