#pragma once

// Coherent-population-trapping (dark) steady state of the lossless model.
//
// With b = 0 the state is stationary in the frame a ~ exp(-i mu t),
// b, g ~ exp(-2 i mu t) provided W1 a^2 + W2 g = 0 and the two-photon
// detuning satisfies the collision-shifted resonance condition.

#include "stirap/model.hpp"

namespace stirap {

struct CptPopulations {
  double pop_a = 1.0;  // |a0|^2
  double pop_g = 0.0;  // |g0|^2, pop_a + 2 pop_g = 1
};

struct CptPoint {
  double pop_a = 1.0;
  double pop_g = 0.0;
  double delta = 0.0;  // generalised two-photon detuning
  double mu_a = 0.0;   // atomic chemical potential
  Amplitude amp_a{1.0, 0.0};
  Amplitude amp_g{0.0, 0.0};
  double ratio = 0.0;  // W1 / W2
};

/// pop_a = 2 / (1 + sqrt(1 + 8 r^2)). r = +inf gives the (0, 1/2) limit.
/// Throws DomainError for negative or NaN r.
CptPopulations cpt_populations(double ratio);

/// delta = (2 L_aa - L_ag) pop_a + (2 L_ag - L_gg) pop_g.
/// Throws ContractError unless pop_a + 2 pop_g = 1 within 1e-12.
double generalized_delta(double pop_a, double pop_g, const SystemParams& params);

/// mu_a = L_aa pop_a + L_ag pop_g (same precondition as generalized_delta).
double chemical_potential(double pop_a, double pop_g, const SystemParams& params);

/// Dark state for the given couplings with amp_a real positive and
/// amp_g = -r amp_a^2 real non-positive. Throws DomainError if omega2 <= 0.
CptPoint cpt_state(double omega1, double omega2, const SystemParams& params);

}  // namespace stirap
