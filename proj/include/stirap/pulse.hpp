#pragma once

#include "stirap/model.hpp"

namespace stirap {

enum class Pulse { FreeBound = 1, BoundBound = 2 };

/// Two Gaussian pulses W_s(t) = peak_s exp(-(t - t_s)^2 / tau^2).
/// Counterintuitive order is t2 < t1 (bound-bound pulse first).
struct PulsePair {
  double peak1 = 2.1;
  double peak2 = 2.1;
  double tau = 5.0e3 / 2.1;
  double t1 = 3.77 * (5.0e3 / 2.1);
  double t2 = 2.5 * (5.0e3 / 2.1);

  static PulsePair from(const SystemParams& params) {
    return {params.omega0, params.omega0, params.tau, params.t1, params.t2};
  }

  bool counterintuitive() const { return t2 < t1; }
};

double rabi(const PulsePair& pulses, Pulse which, double t);

/// W1(t) / W2(t), evaluated from the exponent difference so it stays finite
/// where both Gaussians underflow. May return +inf far past t1 when t1 > t2.
double rabi_ratio(const PulsePair& pulses, double t);

/// Two-photon detuning that keeps the instantaneous dark state resonant.
double delta_schedule(const PulsePair& pulses, const SystemParams& params, double t);

/// Bound-bound detuning implied by the schedule, D2 = D1 - delta(t).
double delta2_schedule(const PulsePair& pulses, const SystemParams& params, double t);

/// Both Rabi frequencies and the detuning at one instant.
struct Drive {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double delta = 0.0;
};

Drive drive_at(const PulsePair& pulses, const SystemParams& params, double t);

}  // namespace stirap
