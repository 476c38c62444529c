#pragma once

// Embedded Dormand-Prince 5(4) integrator with FSAL and the 4th-order
// continuous extension, over a fixed number of complex components.
//
// The local error of component k is measured on the complex modulus and
// scaled by max(abstol, reltol * |y_k|), so the step sequence depends only
// on |y_k| and |err_k|. A trajectory started from a phase-rotated state
// therefore takes the same steps as the unrotated one.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>

#include "stirap/errors.hpp"

namespace stirap::ode {

template <std::size_t N>
using State = std::array<std::complex<double>, N>;

struct Options {
  double reltol = 1e-9;
  double abstol = 1e-12;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 200'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

namespace detail {

// Dormand & Prince (1980) coefficients, dense output from Hairer's DOPRI5.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace detail

/// Integrates dy/dt = f(t, y) from t0 to t_end (t_end > t0).
///
/// `f(t, y, dydt)` fills dydt. `sample_times` must be non-decreasing and lie in
/// [t0, t_end]; `on_sample(t, y)` is called once per entry with the dense-output
/// state. Returns the state at t_end.
template <std::size_t N, class F, class Sample>
State<N> integrate(F&& f, State<N> y, double t0, double t_end, std::span<const double> sample_times,
                   Sample&& on_sample, const Options& opt, Stats* stats = nullptr) {
  using namespace detail;
  if (!(t_end > t0)) throw std::invalid_argument("ode::integrate: t_end must exceed t0");
  if (!(opt.reltol > 0.0) || !(opt.abstol > 0.0)) {
    throw std::invalid_argument("ode::integrate: tolerances must be positive");
  }

  Stats local;
  Stats& st = stats ? *stats : local;

  auto scaled_error = [&](const State<N>& err, const State<N>& ya, const State<N>& yb) {
    double worst = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double scale =
          std::max(opt.abstol, opt.reltol * std::max(std::abs(ya[k]), std::abs(yb[k])));
      worst = std::max(worst, std::abs(err[k]) / scale);
    }
    return worst;
  };

  double t = t0;
  std::size_t next_sample = 0;
  auto emit_until = [&](double t_hi, auto&& value_at) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t_hi) {
      const double ts = sample_times[next_sample];
      on_sample(ts, value_at(ts));
      ++next_sample;
    }
  };
  emit_until(t0, [&](double) { return y; });

  State<N> k1, k2, k3, k4, k5, k6, k7, tmp, y_new, err;
  // Low-order bits lost when adding each increment to y (compensated
  // summation); keeps round-off from random-walking over millions of steps.
  State<N> carry{}, carry_new;
  f(t, y, k1);
  ++st.rhs_evaluations;

  double h = opt.initial_step;
  if (!(h > 0.0)) {
    State<N> zero{};
    const double dy = scaled_error(k1, y, y);
    const double yn = scaled_error(y, zero, zero);
    h = (dy > 1e-10 && yn > 1e-10) ? 0.01 * yn / dy : 1e-6 * (t_end - t0);
    h = std::min(h, 0.01 * (t_end - t0));
  }
  h = std::min(h, opt.max_step);

  const double eps = std::numeric_limits<double>::epsilon();
  bool last = false;
  while (!last) {
    if (st.accepted + st.rejected >= opt.max_steps) {
      throw IntegrationError("ode::integrate: step budget exhausted", t);
    }
    if (h < 16.0 * eps * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "ode::integrate: step size underflow at t=" << t << " (h=" << h << ")";
      throw IntegrationError(msg.str(), t);
    }
    if (t + 1.01 * h >= t_end) {
      h = t_end - t;
      last = true;
    }

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    f(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = last ? t_end : t + h;
    f(t_new, tmp, k6);
    for (std::size_t i = 0; i < N; ++i) {
      const std::complex<double> inc =
          h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]) + carry[i];
      y_new[i] = y[i] + inc;
      carry_new[i] = inc - (y_new[i] - y[i]);
    }
    f(t_new, y_new, k7);
    st.rhs_evaluations += 6;

    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double e = scaled_error(err, y, y_new);
    if (!std::isfinite(e)) {
      throw IntegrationError("ode::integrate: non-finite error estimate", t);
    }

    if (e <= 1.0) {
      ++st.accepted;
      if (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
        State<N> r1 = y, r2, r3, r4, r5;
        for (std::size_t i = 0; i < N; ++i) {
          r2[i] = y_new[i] - y[i];
          r3[i] = h * k1[i] - r2[i];
          r4[i] = r2[i] - h * k7[i] - r3[i];
          r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        const double t_old = t;
        emit_until(t_new, [&](double ts) {
          if (ts == t_new) return y_new;
          const double th = (ts - t_old) / h;
          const double th1 = 1.0 - th;
          State<N> out;
          for (std::size_t i = 0; i < N; ++i) {
            out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
          }
          return out;
        });
      }
      y = y_new;
      carry = carry_new;
      k1 = k7;
      t = t_new;
      const double factor = e > 0.0 ? 0.9 * std::pow(e, -0.2) : 5.0;
      h = std::min(opt.max_step, h * std::clamp(factor, 0.2, 5.0));
    } else {
      ++st.rejected;
      last = false;
      h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
    }
  }
  emit_until(std::numeric_limits<double>::infinity(), [&](double) { return y; });
  return y;
}

}  // namespace stirap::ode
