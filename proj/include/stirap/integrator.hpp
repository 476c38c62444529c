#pragma once

#include <cstddef>
#include <vector>

#include "stirap/model.hpp"
#include "stirap/pulse.hpp"

namespace stirap {

struct TrajectorySample {
  StateVector state;  // state.t is the sample time
  double omega1 = 0.0;
  double omega2 = 0.0;
  double delta = 0.0;
  double norm = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double t_end = 0.0;
  double eta = 0.0;  // 2 |g(t_end)|^2
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
};

struct EvolveOptions {
  double reltol = 1e-9;
  double abstol = 1e-12;
  std::size_t samples = 2000;  // uniformly spaced, both endpoints included
};

/// Integration window [0, t1 + 4 tau]; both pulses are below 1e-5 of their
/// peak at the upper end.
struct Window {
  double t_start = 0.0;
  double t_end = 0.0;
};
Window default_window(const PulsePair& pulses);

/// Pure atomic condensate a = 1 at t = 0.
StateVector atomic_initial_state(double t = 0.0);

/// Integrates the mean-field equations under the pulse pair with the
/// dark-state detuning schedule. Throws IntegrationError on step underflow,
/// DomainError on invalid arguments.
Trajectory evolve(const SystemParams& params, const PulsePair& pulses, const StateVector& initial,
                  double t_start, double t_end, const EvolveOptions& options = {});

/// Default window and initial state.
Trajectory evolve(const SystemParams& params, const EvolveOptions& options = {});

/// 2 |g|^2 at the last sample. Throws std::invalid_argument on an empty trajectory.
double efficiency(const Trajectory& trajectory);

}  // namespace stirap
