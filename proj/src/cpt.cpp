#include "stirap/cpt.hpp"

#include <cmath>
#include <limits>

#include "stirap/errors.hpp"

namespace stirap {

namespace {

constexpr double kPopulationTolerance = 1e-12;

void require_consistent(double pop_a, double pop_g, const char* who) {
  if (!(std::abs(pop_a + 2.0 * pop_g - 1.0) <= kPopulationTolerance)) {
    throw ContractError(std::string(who) + ": populations violate pop_a + 2 pop_g = 1");
  }
}

}  // namespace

CptPopulations cpt_populations(double ratio) {
  if (std::isnan(ratio) || ratio < 0.0) {
    throw DomainError("cpt_populations: ratio must be non-negative");
  }
  if (std::isinf(ratio)) return {0.0, 0.5};
  // Rationalised form; no cancellation at large r.
  const double pop_a = 2.0 / (1.0 + std::sqrt(1.0 + 8.0 * ratio * ratio));
  return {pop_a, 0.5 * (1.0 - pop_a)};
}

double generalized_delta(double pop_a, double pop_g, const SystemParams& p) {
  require_consistent(pop_a, pop_g, "generalized_delta");
  return (2.0 * p.lambda_aa - p.lambda_ag) * pop_a + (2.0 * p.lambda_ag - p.lambda_gg) * pop_g;
}

double chemical_potential(double pop_a, double pop_g, const SystemParams& p) {
  require_consistent(pop_a, pop_g, "chemical_potential");
  return p.lambda_aa * pop_a + p.lambda_ag * pop_g;
}

CptPoint cpt_state(double omega1, double omega2, const SystemParams& params) {
  if (!(omega2 > 0.0)) {
    throw DomainError("cpt_state: no dark state without the bound-bound coupling (omega2 <= 0)");
  }
  if (!(omega1 >= 0.0)) throw DomainError("cpt_state: omega1 must be non-negative");

  CptPoint point;
  point.ratio = omega1 / omega2;
  const auto pops = cpt_populations(point.ratio);
  point.pop_a = pops.pop_a;
  point.pop_g = pops.pop_g;
  point.delta = generalized_delta(pops.pop_a, pops.pop_g, params);
  point.mu_a = chemical_potential(pops.pop_a, pops.pop_g, params);
  point.amp_a = Amplitude{std::sqrt(pops.pop_a), 0.0};
  point.amp_g = Amplitude{-point.ratio * pops.pop_a, 0.0};
  return point;
}

}  // namespace stirap
