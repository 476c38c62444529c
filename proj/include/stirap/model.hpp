#pragma once

// Mean-field three-mode model: atomic condensate a, excited molecules b,
// stable ground-state molecules g.
//
// Units: time in microseconds, frequencies in rad/us. A value quoted in
// "MHz" is used numerically as rad/us and "kHz" as 1e-3 rad/us, with no
// extra factors of 2*pi.

#include <complex>

namespace stirap {

using Amplitude = std::complex<double>;

namespace units {
inline constexpr double MHz = 1.0;
inline constexpr double kHz = 1.0e-3;
inline constexpr double us = 1.0;
inline constexpr double ms = 1.0e3;
}  // namespace units

struct StateVector {
  Amplitude a{1.0, 0.0};
  Amplitude b{0.0, 0.0};
  Amplitude g{0.0, 0.0};
  double t = 0.0;

  double pop_a() const { return std::norm(a); }
  double pop_b() const { return std::norm(b); }
  double pop_g() const { return std::norm(g); }

  /// Atom-number normalisation |a|^2 + 2|b|^2 + 2|g|^2. Each molecule holds
  /// two atoms; this is the quantity the lossless equations conserve.
  double norm() const { return pop_a() + 2.0 * (pop_b() + pop_g()); }

  bool finite() const;
};

struct SystemParams {
  double omega0 = 2.1;                 // peak Rabi frequency
  double tau = 5.0e3 / 2.1;            // pulse width, omega0 * tau = 5e3
  double t1 = 3.77 * (5.0e3 / 2.1);    // free-bound (pump) pulse centre
  double t2 = 2.5 * (5.0e3 / 2.1);     // bound-bound (Stokes) pulse centre
  double delta1 = -1.4 * 74.0;         // free-bound detuning
  double gamma_b = 74.0;               // excited-molecule decay rate
  double lambda_aa = 21.328e-3;        // collision rates rho * U_ij
  double lambda_ag = -27.692e-3;
  double lambda_gg = 10.664e-3;

  double delay() const { return t1 - t2; }

  /// Throws DomainError if omega0 <= 0, tau <= 0, gamma_b < 0 or any field is non-finite.
  void validate() const;
};

struct CollisionRates {
  double lambda_aa = 0.0;
  double lambda_ag = 0.0;
  double lambda_gg = 0.0;
};

/// Lambda_ij = rho * U_ij, returned in the frequency unit of the U_ij.
CollisionRates collision_rates_from_density(double rho, double u_aa, double u_ag, double u_gg);

struct Derivative {
  Amplitude da;
  Amplitude db;
  Amplitude dg;
};

/// Time derivative of (a, b, g):
///   i da/dt = (L_aa|a|^2 + L_ag|g|^2) a - W1 a* b
///   i db/dt = (D1 - i gamma_b/2) b - (W1 a^2 + W2 g)/2
///   i dg/dt = (L_ag|a|^2 + L_gg|g|^2) g + delta g - W2 b/2
/// Throws NumericError on non-finite input.
Derivative rhs(const StateVector& state, const SystemParams& params, double omega1, double omega2,
               double delta);

/// d/dt of StateVector::norm() implied by a derivative; equals -2 gamma_b |b|^2.
double norm_rate(const StateVector& state, const Derivative& d);

}  // namespace stirap
