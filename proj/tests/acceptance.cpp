// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are the ones the criteria state.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "stirap/config.hpp"
#include "stirap/cpt.hpp"
#include "stirap/integrator.hpp"
#include "stirap/io.hpp"
#include "stirap/parallel.hpp"
#include "stirap/stability.hpp"
#include "stirap/sweep.hpp"

using namespace stirap;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path kScratch = fs::temp_directory_path() / "stirap_acceptance";

// The full stability-map axes used by criteria 6 and 7.
const std::vector<double> kRatios = linspace(0.01, 3.0, 200);
const std::vector<double> kDetunings = linspace(-1.5, 1.5, 200);

const StabilityMap& full_map() {
  static const StabilityMap map = stability_map(SystemParams{}, kRatios, kDetunings, 0);
  return map;
}

Verdict headline() {
  fs::remove_all(kScratch / "headline");
  RunConfig c = parse_config(std::nullopt, {{"evolve.compare_gamma_scales", "true"},
                                            {"out", (kScratch / "headline").string()}});
  c.command = "evolve";
  std::ostringstream diag;
  if (run(c, diag) != exit_code::ok) return {false, "evolve failed: " + diag.str()};
  const auto m = nlohmann::json::parse(slurp(kScratch / "headline" / "manifest.json"));
  const std::string which = m["result.gamma_check.matches_headline"];
  const double primary = std::stod(m["result.gamma_check.primary_eta"].get<std::string>());
  const double alt = std::stod(m["result.gamma_check.alternate_eta"].get<std::string>());
  return {which != "none", "eta(gamma_b=74 MHz)=" + fmt("%.4f", primary) +
                               ", eta(gamma_b=0.74 MHz)=" + fmt("%.4f", alt) +
                               ", manifest records matches_headline=" + which};
}

Verdict cpt_limits() {
  const auto zero = cpt_populations(0.0);
  const auto big = cpt_populations(1e6);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng);
    const auto p = cpt_populations(r);
    worst = std::max(worst, std::abs(2 * r * r * p.pop_a * p.pop_a + p.pop_a - 1.0));
  }
  const bool ok = zero.pop_a == 1.0 && zero.pop_g == 0.0 && std::abs(big.pop_g - 0.5) < 1e-6 &&
                  worst < 1e-12;
  return {ok, "|pop_g(1e6)-0.5|=" + fmt("%.2e", std::abs(big.pop_g - 0.5)) +
                  ", max identity residual=" + fmt("%.2e", worst)};
}

Verdict conservation() {
  SystemParams lossless;
  lossless.gamma_b = 0.0;
  const Trajectory t0 = evolve(lossless);
  double drift = 0.0;
  for (const auto& s : t0.samples) drift = std::max(drift, std::abs(s.norm - t0.samples[0].norm));

  const Trajectory t1 = evolve(SystemParams{});
  std::size_t rises = 0;
  double worst_rise = 0.0;
  for (std::size_t i = 1; i < t1.samples.size(); ++i) {
    const double rise = t1.samples[i].norm - t1.samples[i - 1].norm;
    if (rise > 0.0) {
      ++rises;
      worst_rise = std::max(worst_rise, rise);
    }
  }
  const double norm_end = t1.samples.back().norm;
  const double ulp = std::nextafter(norm_end, 2.0) - norm_end;
  return {drift < 1e-8 && rises == 0,
          "lossless drift=" + fmt("%.2e", drift) + ", lossy increases=" + std::to_string(rises) +
              " (largest " + fmt("%.1e", worst_rise) + " = " + fmt("%.1f", worst_rise / ulp) +
              " ulp of the norm)"};
}

Verdict gauge() {
  const SystemParams p;
  const PulsePair pulses = PulsePair::from(p);
  const Window w = default_window(pulses);
  const Trajectory ref = evolve(p, pulses, atomic_initial_state(), w.t_start, w.t_end);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::vector<double> thetas(10);
  for (auto& th : thetas) th = angle(rng);
  std::vector<double> worst(thetas.size(), 0.0);
  parallel_for(thetas.size(), 0, [&](std::size_t k) {
    StateVector init = atomic_initial_state();
    init.a = std::polar(1.0, thetas[k]);
    const Trajectory rot = evolve(p, pulses, init, w.t_start, w.t_end);
    for (std::size_t i = 0; i < ref.samples.size(); ++i) {
      const StateVector& x = ref.samples[i].state;
      const StateVector& y = rot.samples[i].state;
      worst[k] = std::max({worst[k], std::abs(x.pop_a() - y.pop_a()), std::abs(x.pop_b() - y.pop_b()),
                           std::abs(x.pop_g() - y.pop_g())});
    }
  });
  const double max_dev = *std::max_element(worst.begin(), worst.end());
  return {max_dev <= 1e-10, "max population difference over 10 angles=" + fmt("%.2e", max_dev)};
}

Verdict delta_endpoints() {
  const SystemParams p;
  const Trajectory traj = evolve(p);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, PulsePair::from(p));

  // Pull the delta column back out of the emitted text.
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  std::size_t col = 0;
  {
    std::istringstream hs(line);
    std::string name;
    for (std::size_t i = 0; std::getline(hs, name, ','); ++i) {
      if (name == "delta") col = i;
    }
  }
  std::vector<double> delta;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t i = 0; i <= col; ++i) std::getline(ls, cell, ',');
    delta.push_back(std::stod(cell));
  }
  const double first = delta.front() / units::kHz, last = delta.back() / units::kHz;
  const bool ok = std::abs(first - 70.35) <= 0.01 * 70.35 && std::abs(last + 33.02) <= 0.01 * 33.02;
  return {ok, "first=" + fmt("%.4f", first) + " kHz, last=" + fmt("%.4f", last) + " kHz"};
}

// Criterion 6 reads the map on its native axes (Delta1/W1, W2/W1).
struct MapCensus {
  std::size_t unstable = 0;
  std::size_t blue_outside_band = 0;  // (a)
  std::size_t outside_band = 0;       // candidates for region I
  std::size_t outside_band_red = 0;   // (b)
  std::size_t strong_w2 = 0;          // (c)
  double strong_w2_worst_ratio = 0.0;
};

MapCensus census() {
  const SystemParams p;
  const double band_centre = p.lambda_ag / p.omega0;
  const StabilityMap& map = full_map();
  MapCensus c;
  for (std::size_t i = 0; i < kDetunings.size(); ++i) {
    for (std::size_t j = 0; j < kRatios.size(); ++j) {
      if (!map.at(i, j).unstable) continue;
      ++c.unstable;
      const double d = kDetunings[i];
      const bool in_band = std::abs(d - band_centre) <= 0.05;
      if (!in_band) {
        ++c.outside_band;
        if (d > 0.0) ++c.outside_band_red;
        if (d < -0.2) ++c.blue_outside_band;
      }
      if (kRatios[j] > 2.0) {
        ++c.strong_w2;
        c.strong_w2_worst_ratio = std::max(c.strong_w2_worst_ratio, kRatios[j]);
      }
    }
  }
  return c;
}

Verdict stability_a(const MapCensus& c) {
  return {c.blue_outside_band == 0,
          std::to_string(c.unstable) + " unstable cells of 40000; " +
              std::to_string(c.blue_outside_band) + " at Delta1<-0.2 W1 outside the Lambda_ag band"};
}

Verdict stability_b(const MapCensus& c) {
  const bool ok = c.outside_band == c.outside_band_red;
  std::string note = std::to_string(c.outside_band) + " unstable cells outside the Lambda_ag band, " +
                     std::to_string(c.outside_band_red) + " of them at Delta1>0";
  if (c.outside_band == 0) note += " (no region-I cells found; condition holds vacuously)";
  return {ok, note};
}

Verdict stability_c(const MapCensus& c) {
  return {c.strong_w2 == 0, std::to_string(c.strong_w2) + " unstable cells with W2/W1>2" +
                                (c.strong_w2 ? " (up to W2/W1=" + fmt("%.3f", c.strong_w2_worst_ratio) +
                                                   ", all inside the Lambda_ag band)"
                                             : std::string())};
}

Verdict oracle_agreement() {
  const SystemParams p;
  const StabilityMap& map = full_map();
  const std::vector<std::size_t> rows{0, 40, 80, 98, 99, 100, 101, 120, 160, 199};
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < 10; ++k) cols.push_back(k * 22);

  const double w1 = p.omega0;
  const double horizon = 5000.0 / w1;
  const double step = 0.02 / w1;
  std::vector<int> agree(rows.size() * cols.size(), 0);
  parallel_for(agree.size(), 0, [&](std::size_t n) {
    const std::size_t i = rows[n / cols.size()], j = cols[n % cols.size()];
    const auto v = oracle::perturbation_growth(w1, kRatios[j] * w1, kDetunings[i] * w1, p.lambda_aa,
                                               p.lambda_ag, p.lambda_gg, horizon, step, 1e-6,
                                               static_cast<unsigned>(n));
    agree[n] = v.grew == map.at(i, j).unstable ? 1 : 0;
  });
  std::size_t hits = 0, unstable = 0;
  for (int a : agree) hits += static_cast<std::size_t>(a);
  for (std::size_t i : rows) {
    for (std::size_t j : cols) unstable += map.at(i, j).unstable ? 1 : 0;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(agree.size());
  return {frac >= 0.95, std::to_string(hits) + "/" + std::to_string(agree.size()) +
                            " cells agree (" + std::to_string(unstable) +
                            " flagged unstable by the eigenvalues)"};
}

Verdict jacobian_checks() {
  const SystemParams base;
  const double w0 = base.omega0;
  double fd_vs_an = 0.0, closure = 0.0, trace = 0.0;
  for (std::size_t i = 0; i < kDetunings.size(); i += 7) {
    for (std::size_t j = 0; j < kRatios.size(); j += 7) {
      SystemParams p = base;
      p.delta1 = kDetunings[i] * w0;
      const double w2 = kRatios[j] * w0;
      const Jacobian fd = linearize_at_cpt(p, w0, w2);
      const Jacobian an = analytic_jacobian_at_cpt(p, w0, w2);
      fd_vs_an = std::max(fd_vs_an, (fd - an).cwiseAbs().maxCoeff());
      trace = std::max(trace, std::abs(fd.trace()));
      const StabilityResult r = classify_jacobian(fd, w0);
      for (const auto& w : r.eigenfrequencies) {
        double best = 1e300;
        for (const auto& v : r.eigenfrequencies) best = std::min(best, std::abs(v + std::conj(w)));
        closure = std::max(closure, best);
      }
    }
  }
  const bool ok = fd_vs_an < 1e-6 * w0 && closure < 1e-8 * w0 && trace < 1e-9 * w0;
  return {ok, "max |J_fd-J_an|=" + fmt("%.2e", fd_vs_an / w0) + " W0, closure=" +
                  fmt("%.2e", closure / w0) + " W0, |trace|=" + fmt("%.2e", trace / w0) + " W0"};
}

Verdict delay_ordering(double& eta_red, double& plateau_min) {
  const SystemParams p;
  const SweepOptions opts{EvolveOptions{}, 0};
  const SweepResult delays =
      sweep_eta(p, {p.delta1}, {3.0 * p.tau, 3.77 * p.tau, 4.5 * p.tau}, p.t2, opts);
  const double e30 = delays.at(0, 0).eta, e377 = delays.at(0, 1).eta, e45 = delays.at(0, 2).eta;

  const SweepResult red = sweep_eta(p, {0.5 * p.omega0}, {p.t1}, p.t2, opts);
  eta_red = red.cells[0].eta;

  std::vector<double> blue = linspace(-3.0, -0.5, 11);
  for (double& d : blue) d *= p.gamma_b;
  const SweepResult plateau = sweep_eta(p, blue, {p.t1}, p.t2, opts);
  plateau_min = 1.0;
  for (const auto& c : plateau.cells) plateau_min = std::min(plateau_min, c.ok() ? c.eta : 0.0);

  const bool ordering = e377 > e30 && e377 > e45;
  return {ordering, "eta(3.0 tau)=" + fmt("%.4f", e30) + ", eta(3.77 tau)=" + fmt("%.4f", e377) +
                        ", eta(4.5 tau)=" + fmt("%.4f", e45)};
}

Verdict determinism() {
  const std::vector<std::pair<std::string, KeyValues>> jobs{
      {"stability-map", {{"map.ratio_points", "60"}, {"map.detuning_points", "60"}}},
      {"sweep", {{"sweep.delta1_points", "5"}, {"samples", "50"}}},
  };
  const char* csv_for[] = {"stability_map.csv", "sweep.csv"};
  std::string detail;
  bool ok = true;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "1", "3", "0"}) {
      const fs::path dir = kScratch / ("det_" + jobs[k].first + "_" + std::to_string(outputs.size()));
      fs::remove_all(dir);
      KeyValues flags = jobs[k].second;
      flags.emplace_back("threads", threads);
      flags.emplace_back("out", dir.string());
      RunConfig c = parse_config(std::nullopt, flags);
      c.command = jobs[k].first;
      std::ostringstream diag;
      if (run(c, diag) != exit_code::ok) return {false, jobs[k].first + " failed: " + diag.str()};
      outputs.push_back(slurp(dir / csv_for[k]));
    }
    const bool same = std::all_of(outputs.begin(), outputs.end(),
                                  [&](const std::string& s) { return s == outputs.front(); });
    ok = ok && same && !outputs.front().empty();
    detail += (detail.empty() ? "" : "; ") + jobs[k].first + " threads {1,1,3,all}: " +
              (same ? "identical" : "DIFFERENT");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  fs::create_directories(kScratch);
  int failures = 0;
  auto report = [&](const std::string& id, const std::string& what, const Verdict& v) {
    std::printf("%s criterion %s: %s -- %s\n", v.pass ? "PASS" : "FAIL", id.c_str(), what.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  };
  auto guarded = [&](const std::string& id, const std::string& what, const std::function<Verdict()>& f) {
    try {
      report(id, what, f());
    } catch (const std::exception& e) {
      report(id, what, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded("1", "headline efficiency 0.92 +/- 0.04 under one gamma_b reading", headline);
  guarded("2", "dark-state population limits and identity", cpt_limits);
  guarded("3", "norm conservation and monotone decay", conservation);
  guarded("4", "gauge invariance to 1e-10", gauge);
  guarded("5", "delta(t) endpoints within 1%", delta_endpoints);

  MapCensus c;
  bool have_census = true;
  try {
    c = census();
  } catch (const std::exception& e) {
    have_census = false;
    report("6", "stability map", {false, std::string("exception: ") + e.what()});
  }
  if (have_census) {
    report("6a", "no blue-detuned instability outside the Lambda_ag band", stability_a(c));
    report("6b", "region-I cells only at Delta1>0", stability_b(c));
    report("6c", "no instability for W2/W1>2", stability_c(c));
  }

  guarded("7", "eigenvalue flag agrees with the perturbation oracle on >=95% of a 10x10 subgrid",
          oracle_agreement);
  guarded("8", "Jacobian cross-check, spectral closure and trace", jacobian_checks);

  double eta_red = 0.0, plateau_min = 0.0;
  guarded("9a", "eta(t1=3.77 tau) beats 3.0 tau and 4.5 tau at Delta1=-1.4 gamma_b",
          [&] { return delay_ordering(eta_red, plateau_min); });
  report("9b", "eta < 0.2 at Delta1=+0.5 W1, t1=3.77 tau",
         {eta_red < 0.2, "eta=" + fmt("%.4f", eta_red)});
  report("9c", "blue-detuned plateau (Delta1 in [-3, -0.5] gamma_b) above 0.85",
         {plateau_min > 0.85, "min eta over 11 points=" + fmt("%.4f", plateau_min)});

  guarded("10", "byte-identical CSVs for any thread count", determinism);

  std::printf("SKIP criterion 11: figure rendering is a secondary component and is not built\n");
  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
