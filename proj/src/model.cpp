#include "stirap/model.hpp"

#include <cmath>
#include <sstream>

#include "stirap/errors.hpp"

namespace stirap {

namespace {

bool finite(Amplitude z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

bool StateVector::finite() const {
  return stirap::finite(a) && stirap::finite(b) && stirap::finite(g) && std::isfinite(t);
}

void SystemParams::validate() const {
  const double fields[] = {omega0, tau, t1, t2, delta1, gamma_b, lambda_aa, lambda_ag, lambda_gg};
  for (double v : fields) {
    if (!std::isfinite(v)) throw DomainError("SystemParams: non-finite field");
  }
  if (!(omega0 > 0.0)) throw DomainError("SystemParams: omega0 must be positive");
  if (!(tau > 0.0)) throw DomainError("SystemParams: tau must be positive");
  if (gamma_b < 0.0) throw DomainError("SystemParams: gamma_b must be non-negative");
}

CollisionRates collision_rates_from_density(double rho, double u_aa, double u_ag, double u_gg) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("collision_rates_from_density: density must be positive and finite");
  }
  return {rho * u_aa, rho * u_ag, rho * u_gg};
}

Derivative rhs(const StateVector& s, const SystemParams& p, double omega1, double omega2,
               double delta) {
  if (!s.finite()) {
    std::ostringstream msg;
    msg << "rhs: non-finite amplitude at t=" << s.t << " (a=" << s.a << ", b=" << s.b
        << ", g=" << s.g << ")";
    throw NumericError(msg.str());
  }
  constexpr Amplitude I{0.0, 1.0};
  const double na = std::norm(s.a);
  const double ng = std::norm(s.g);

  const Amplitude ha = (p.lambda_aa * na + p.lambda_ag * ng) * s.a - omega1 * std::conj(s.a) * s.b;
  const Amplitude hb = Amplitude{p.delta1, -0.5 * p.gamma_b} * s.b -
                       0.5 * (omega1 * s.a * s.a + omega2 * s.g);
  const Amplitude hg = (p.lambda_ag * na + p.lambda_gg * ng + delta) * s.g - 0.5 * omega2 * s.b;
  return {-I * ha, -I * hb, -I * hg};
}

double norm_rate(const StateVector& s, const Derivative& d) {
  const auto dpop = [](Amplitude z, Amplitude dz) { return 2.0 * std::real(std::conj(z) * dz); };
  return dpop(s.a, d.da) + 2.0 * (dpop(s.b, d.db) + dpop(s.g, d.dg));
}

}  // namespace stirap
