#include "stirap/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "stirap/errors.hpp"
#include "stirap/parallel.hpp"

namespace stirap {

namespace {

SweepCell run_cell(const SystemParams& base, double delta1, double t1, double t2,
                   const EvolveOptions& options) {
  SweepCell cell{delta1, t1, 0.0, "ok", {}};
  SystemParams p = base;
  p.delta1 = delta1;
  p.t1 = t1;
  p.t2 = t2;
  try {
    cell.eta = evolve(p, options).eta;
  } catch (const IntegrationError& e) {
    cell.eta = std::nan("");
    cell.status = "integration_failure";
    cell.message = e.what();
  } catch (const NumericError& e) {
    cell.eta = std::nan("");
    cell.status = "nonfinite";
    cell.message = e.what();
  }
  return cell;
}

std::vector<double> local_axis(double centre, double half_width, double lo, double hi) {
  std::vector<double> axis;
  for (int k = -2; k <= 2; ++k) {
    axis.push_back(std::clamp(centre + 0.5 * k * half_width, lo, hi));
  }
  return axis;
}

}  // namespace

SweepResult sweep_eta(const SystemParams& base, const std::vector<double>& delta1_axis,
                      const std::vector<double>& t1_axis, double t2, const SweepOptions& options) {
  base.validate();
  if (delta1_axis.empty() || t1_axis.empty()) throw DomainError("sweep_eta: empty axis");

  SweepResult result;
  result.delta1_axis = delta1_axis;
  result.t1_axis = t1_axis;
  result.t2 = t2;
  result.cells.resize(delta1_axis.size() * t1_axis.size());
  const std::size_t nt = t1_axis.size();
  parallel_for(result.cells.size(), options.threads, [&](std::size_t idx) {
    result.cells[idx] = run_cell(base, delta1_axis[idx / nt], t1_axis[idx % nt], t2, options.evolve);
  });

  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const SweepCell& c = result.cells[i];
    if (!c.ok()) continue;
    if (!result.any_ok || c.eta > result.cells[result.best_index].eta) {
      result.best_index = i;
      result.any_ok = true;
    }
  }
  return result;
}

OptimizeResult optimize(const SystemParams& base, const OptimizeBounds& b, std::size_t budget,
                        const SweepOptions& options) {
  base.validate();
  if (budget < 9) throw DomainError("optimize: budget must be at least 9");
  if (!(b.delta1_hi >= b.delta1_lo) || !(b.delay_hi >= b.delay_lo)) {
    throw DomainError("optimize: empty bounds");
  }

  constexpr std::size_t kLocalPoints = 25;
  const std::size_t rounds = std::min<std::size_t>(3, (budget - 9) / kLocalPoints);
  const auto coarse_n = static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(budget - rounds * kLocalPoints))));

  std::map<std::pair<double, double>, SweepCell> cache;
  std::size_t evaluations = 0;
  bool have_best = false;
  double best_eta = 0.0, best_d = 0.0, best_T = 0.0;

  // Evaluates the not-yet-seen points of a grid in parallel, then updates the
  // incumbent in grid order so ties resolve the same way for any thread count.
  auto evaluate_grid = [&](const std::vector<double>& d_axis, const std::vector<double>& T_axis) {
    std::vector<std::pair<double, double>> pending;
    for (double d : d_axis) {
      for (double T : T_axis) {
        const auto key = std::make_pair(d, T);
        if (cache.count(key) || evaluations + pending.size() >= budget) continue;
        if (std::find(pending.begin(), pending.end(), key) == pending.end()) pending.push_back(key);
      }
    }
    std::vector<SweepCell> out(pending.size());
    parallel_for(pending.size(), options.threads, [&](std::size_t i) {
      out[i] = run_cell(base, pending[i].first, base.t2 + pending[i].second, base.t2, options.evolve);
    });
    evaluations += pending.size();
    for (std::size_t i = 0; i < pending.size(); ++i) cache.emplace(pending[i], out[i]);

    for (double d : d_axis) {
      for (double T : T_axis) {
        const auto it = cache.find({d, T});
        if (it == cache.end() || !it->second.ok()) continue;
        if (!have_best || it->second.eta > best_eta) {
          have_best = true;
          best_eta = it->second.eta;
          best_d = d;
          best_T = T;
        }
      }
    }
  };

  auto axis = [](double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) v.back() = hi;
    return v;
  };

  evaluate_grid(axis(b.delta1_lo, b.delta1_hi, coarse_n), axis(b.delay_lo, b.delay_hi, coarse_n));
  if (!have_best) throw NumericError("optimize: every coarse evaluation failed");
  const double coarse_best = best_eta;

  double wd = (b.delta1_hi - b.delta1_lo) / static_cast<double>(coarse_n - 1);
  double wT = (b.delay_hi - b.delay_lo) / static_cast<double>(coarse_n - 1);
  for (std::size_t r = 0; r < rounds && evaluations < budget; ++r) {
    evaluate_grid(local_axis(best_d, wd, b.delta1_lo, b.delta1_hi),
                  local_axis(best_T, wT, b.delay_lo, b.delay_hi));
    wd /= 3.0;
    wT /= 3.0;
  }

  return {best_d, best_T, best_eta, coarse_best, evaluations};
}

}  // namespace stirap
