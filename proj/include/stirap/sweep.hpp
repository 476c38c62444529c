#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stirap/integrator.hpp"
#include "stirap/model.hpp"

namespace stirap {

struct SweepOptions {
  EvolveOptions evolve;
  unsigned threads = 1;  // 0 = hardware concurrency
};

struct SweepCell {
  double delta1 = 0.0;
  double t1 = 0.0;
  double eta = 0.0;
  std::string status = "ok";  // "ok", "integration_failure" or "nonfinite"
  std::string message;        // diagnostic when status != "ok"
  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  std::vector<double> delta1_axis;
  std::vector<double> t1_axis;
  double t2 = 0.0;
  /// Row-major over delta1: cells[i * t1_axis.size() + j].
  std::vector<SweepCell> cells;
  std::size_t best_index = 0;  // first cell with the largest eta among successful cells
  bool any_ok = false;

  const SweepCell& at(std::size_t delta1_index, std::size_t t1_index) const {
    return cells[delta1_index * t1_axis.size() + t1_index];
  }
  const SweepCell& best() const { return cells[best_index]; }
};

/// Conversion efficiency for every (delta1, t1) with t2 fixed; all other
/// parameters come from `base`. Cell failures are recorded, not thrown.
SweepResult sweep_eta(const SystemParams& base, const std::vector<double>& delta1_axis,
                      const std::vector<double>& t1_axis, double t2, const SweepOptions& options = {});

struct OptimizeBounds {
  double delta1_lo = 0.0, delta1_hi = 0.0;
  double delay_lo = 0.0, delay_hi = 0.0;  // T = t1 - t2
};

struct OptimizeResult {
  double delta1 = 0.0;
  double delay = 0.0;
  double eta = 0.0;
  double coarse_best_eta = 0.0;
  std::size_t evaluations = 0;
};

/// Coarse grid over the bounds followed by up to three 5x5 local grids, each
/// spanning a third of the previous one, around the incumbent. `budget`
/// (>= 9) caps the number of distinct evolve calls. t2 comes from `base`.
/// Throws DomainError on bad bounds or budget, NumericError if every
/// evaluation fails.
OptimizeResult optimize(const SystemParams& base, const OptimizeBounds& bounds, std::size_t budget,
                        const SweepOptions& options = {});

}  // namespace stirap
