#include "stirap/pulse.hpp"

#include <cmath>
#include <limits>

#include "stirap/cpt.hpp"

namespace stirap {

double rabi(const PulsePair& p, Pulse which, double t) {
  const bool first = which == Pulse::FreeBound;
  const double centre = first ? p.t1 : p.t2;
  const double peak = first ? p.peak1 : p.peak2;
  const double x = (t - centre) / p.tau;
  return peak * std::exp(-x * x);
}

double rabi_ratio(const PulsePair& p, double t) {
  if (p.peak1 == 0.0) return 0.0;
  if (p.peak2 == 0.0) return std::numeric_limits<double>::infinity();
  const double x1 = (t - p.t1) / p.tau;
  const double x2 = (t - p.t2) / p.tau;
  // (x2 - x1)(x2 + x1) avoids cancellation between the two squares.
  const double exponent = (x2 - x1) * (x2 + x1);
  return (p.peak1 / p.peak2) * std::exp(exponent);
}

double delta_schedule(const PulsePair& pulses, const SystemParams& params, double t) {
  const auto pops = cpt_populations(rabi_ratio(pulses, t));
  return generalized_delta(pops.pop_a, pops.pop_g, params);
}

double delta2_schedule(const PulsePair& pulses, const SystemParams& params, double t) {
  return params.delta1 - delta_schedule(pulses, params, t);
}

Drive drive_at(const PulsePair& pulses, const SystemParams& params, double t) {
  return {rabi(pulses, Pulse::FreeBound, t), rabi(pulses, Pulse::BoundBound, t),
          delta_schedule(pulses, params, t)};
}

}  // namespace stirap
