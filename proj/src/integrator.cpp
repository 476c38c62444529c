#include "stirap/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "stirap/errors.hpp"
#include "stirap/ode.hpp"

namespace stirap {

Window default_window(const PulsePair& pulses) { return {0.0, pulses.t1 + 4.0 * pulses.tau}; }

StateVector atomic_initial_state(double t) {
  StateVector s;
  s.t = t;
  return s;
}

Trajectory evolve(const SystemParams& params, const PulsePair& pulses, const StateVector& initial,
                  double t_start, double t_end, const EvolveOptions& options) {
  params.validate();
  if (!(t_end > t_start)) throw DomainError("evolve: t_end must exceed t_start");
  if (!initial.finite()) throw DomainError("evolve: initial state is not finite");
  if (initial.norm() > 1.0 + 1e-12) throw DomainError("evolve: initial norm exceeds 1");
  if (options.samples < 2) throw DomainError("evolve: need at least two output samples");
  if (!(pulses.tau > 0.0) || pulses.peak1 < 0.0 || pulses.peak2 < 0.0) {
    throw DomainError("evolve: invalid pulse pair");
  }

  const std::size_t n = options.samples;
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  times.back() = t_end;

  auto f = [&](double t, const ode::State<3>& y, ode::State<3>& dydt) {
    const Drive drive = drive_at(pulses, params, t);
    const Derivative d = rhs(StateVector{y[0], y[1], y[2], t}, params, drive.omega1, drive.omega2,
                             drive.delta);
    dydt = {d.da, d.db, d.dg};
  };

  Trajectory traj;
  traj.samples.reserve(n);
  auto on_sample = [&](double t, const ode::State<3>& y) {
    TrajectorySample s;
    s.state = StateVector{y[0], y[1], y[2], t};
    const Drive drive = drive_at(pulses, params, t);
    s.omega1 = drive.omega1;
    s.omega2 = drive.omega2;
    s.delta = drive.delta;
    s.norm = s.state.norm();
    traj.samples.push_back(s);
  };

  ode::Options opt;
  opt.reltol = options.reltol;
  opt.abstol = options.abstol;
  ode::Stats stats;
  ode::integrate<3>(f, ode::State<3>{initial.a, initial.b, initial.g}, t_start, t_end, times,
                    on_sample, opt, &stats);

  traj.t_end = t_end;
  traj.steps = stats.accepted;
  traj.rejected_steps = stats.rejected;
  traj.eta = efficiency(traj);
  return traj;
}

Trajectory evolve(const SystemParams& params, const EvolveOptions& options) {
  const PulsePair pulses = PulsePair::from(params);
  const Window w = default_window(pulses);
  return evolve(params, pulses, atomic_initial_state(w.t_start), w.t_start, w.t_end, options);
}

double efficiency(const Trajectory& trajectory) {
  if (trajectory.samples.empty()) throw std::invalid_argument("efficiency: empty trajectory");
  return 2.0 * trajectory.samples.back().state.pop_g();
}

}  // namespace stirap
