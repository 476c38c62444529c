#include "doctest.h"

#include <algorithm>

#include "stirap/errors.hpp"
#include "stirap/sweep.hpp"

using namespace stirap;

namespace {

const EvolveOptions kFast{1e-8, 1e-11, 20};

}  // namespace

TEST_CASE("a one-cell sweep is a plain evolve") {
  const SystemParams p;
  const SweepResult s = sweep_eta(p, {p.delta1}, {p.t1}, p.t2, {kFast, 1});
  REQUIRE(s.cells.size() == 1);
  CHECK(s.any_ok);
  CHECK(s.best_index == 0);
  CHECK(s.cells[0].ok());
  CHECK(s.cells[0].eta == evolve(p, kFast).eta);
}

TEST_CASE("sweep layout, best cell and thread independence") {
  const SystemParams p;
  const std::vector<double> d1{-2.0 * p.gamma_b, -1.4 * p.gamma_b, 0.5 * p.gamma_b};
  const std::vector<double> t1{3.0 * p.tau, 3.77 * p.tau};
  const SweepResult serial = sweep_eta(p, d1, t1, p.t2, {kFast, 1});
  const SweepResult threaded = sweep_eta(p, d1, t1, p.t2, {kFast, 3});
  REQUIRE(serial.cells.size() == 6);
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    CHECK(serial.cells[i].eta == threaded.cells[i].eta);
  }
  CHECK(serial.at(2, 1).delta1 == d1[2]);
  CHECK(serial.at(2, 1).t1 == t1[1]);
  double best = 0.0;
  for (const auto& c : serial.cells) best = std::max(best, c.eta);
  CHECK(serial.best().eta == best);
  // red detuning half a linewidth off kills the transfer
  CHECK(serial.at(2, 1).eta < 0.1);
}

TEST_CASE("optimize with the minimum budget is the best of a 3x3 grid") {
  const SystemParams p;
  const OptimizeBounds b{-2.0 * p.gamma_b, -1.0 * p.gamma_b, 1.0 * p.tau, 1.5 * p.tau};
  const OptimizeResult r = optimize(p, b, 9, {kFast, 0});
  CHECK(r.evaluations == 9);
  CHECK(r.eta == r.coarse_best_eta);

  double best = 0.0;
  for (double d : {b.delta1_lo, b.delta1_lo + (b.delta1_hi - b.delta1_lo) * 0.5, b.delta1_hi}) {
    for (double T : {b.delay_lo, b.delay_lo + (b.delay_hi - b.delay_lo) * 0.5, b.delay_hi}) {
      SystemParams q = p;
      q.delta1 = d;
      q.t1 = p.t2 + T;
      best = std::max(best, evolve(q, kFast).eta);
    }
  }
  CHECK(r.eta == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("optimize reaches high efficiency near the reference point") {
  const SystemParams p;
  const OptimizeBounds b{-2.0 * p.gamma_b, -1.0 * p.gamma_b, 1.0 * p.tau, 1.5 * p.tau};
  const OptimizeResult r = optimize(p, b, 40, {kFast, 0});
  CHECK(r.eta >= 0.90);
  CHECK(r.eta >= r.coarse_best_eta);
  CHECK(r.evaluations <= 40);
  CHECK(r.delta1 >= b.delta1_lo);
  CHECK(r.delta1 <= b.delta1_hi);
  CHECK(r.delay >= b.delay_lo);
  CHECK(r.delay <= b.delay_hi);
}

TEST_CASE("optimize on a degenerate box evaluates one point") {
  const SystemParams p;
  const OptimizeBounds b{p.delta1, p.delta1, p.t1 - p.t2, p.t1 - p.t2};
  const OptimizeResult r = optimize(p, b, 9, {kFast, 1});
  CHECK(r.evaluations == 1);
  CHECK(r.eta == doctest::Approx(evolve(p, kFast).eta).epsilon(1e-6));
}

TEST_CASE("optimize argument checks") {
  const SystemParams p;
  CHECK_THROWS_AS(optimize(p, {-1, 0, 1, 2}, 8), DomainError);
  CHECK_THROWS_AS(optimize(p, {0, -1, 1, 2}, 9), DomainError);
  CHECK_THROWS_AS(optimize(p, {-1, 0, 2, 1}, 9), DomainError);
}
