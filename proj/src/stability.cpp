#include "stirap/stability.hpp"

#include <algorithm>
#include <cmath>

#include "stirap/errors.hpp"
#include "stirap/parallel.hpp"

namespace stirap {

namespace {

constexpr Amplitude I{0.0, 1.0};

SystemParams lossless_unless(const SystemParams& params, bool include_loss) {
  SystemParams p = params;
  if (!include_loss) p.gamma_b = 0.0;
  return p;
}

RealState pack(const Derivative& d) {
  RealState out;
  out << d.da.real(), d.da.imag(), d.db.real(), d.db.imag(), d.dg.real(), d.dg.imag();
  return out;
}

// Writes the 2x2 real block for dF_row/dz_col given P = dF/dz and Q = dF/dz*.
void put_block(Jacobian& j, int row, int col, Amplitude p, Amplitude q) {
  const Amplitude d_re = p + q;
  const Amplitude d_im = I * (p - q);
  j(2 * row, 2 * col) = d_re.real();
  j(2 * row + 1, 2 * col) = d_re.imag();
  j(2 * row, 2 * col + 1) = d_im.real();
  j(2 * row + 1, 2 * col + 1) = d_im.imag();
}

void require_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw DomainError(std::string("stability_map: empty ") + name);
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw DomainError(std::string("stability_map: ") + name + " is not strictly increasing");
    }
  }
}

}  // namespace

RealState to_real(const StateVector& s) {
  RealState x;
  x << s.a.real(), s.a.imag(), s.b.real(), s.b.imag(), s.g.real(), s.g.imag();
  return x;
}

StateVector from_real(const RealState& x, double t) {
  return {Amplitude{x(0), x(1)}, Amplitude{x(2), x(3)}, Amplitude{x(4), x(5)}, t};
}

Derivative rotating_frame_rhs(const StateVector& state, const SystemParams& params, double omega1,
                              double omega2, double delta, double mu_a) {
  Derivative d = rhs(state, params, omega1, omega2, delta);
  d.da += I * mu_a * state.a;
  d.db += I * (2.0 * mu_a) * state.b;
  d.dg += I * (2.0 * mu_a) * state.g;
  return d;
}

Jacobian linearize_at_cpt(const SystemParams& params, double omega1, double omega2,
                          const LinearizeOptions& options) {
  const SystemParams p = lossless_unless(params, options.include_loss);
  const CptPoint cpt = cpt_state(omega1, omega2, p);
  const StateVector fixed{cpt.amp_a, Amplitude{}, cpt.amp_g, 0.0};
  const RealState x0 = to_real(fixed);
  const double h = options.fd_step;

  Jacobian j;
  for (int col = 0; col < 6; ++col) {
    RealState plus = x0, minus = x0;
    plus(col) += h;
    minus(col) -= h;
    const RealState f_plus =
        pack(rotating_frame_rhs(from_real(plus), p, omega1, omega2, cpt.delta, cpt.mu_a));
    const RealState f_minus =
        pack(rotating_frame_rhs(from_real(minus), p, omega1, omega2, cpt.delta, cpt.mu_a));
    j.col(col) = (f_plus - f_minus) / (2.0 * h);
  }
  return j;
}

Jacobian analytic_jacobian(const StateVector& s, const SystemParams& p, double omega1,
                           double omega2, double delta, double mu_a) {
  const Amplitude a = s.a, b = s.b, g = s.g;
  const double na = std::norm(a), ng = std::norm(g);
  Jacobian j = Jacobian::Zero();
  constexpr int A = 0, B = 1, G = 2;

  put_block(j, A, A, -I * (2.0 * p.lambda_aa * na + p.lambda_ag * ng) + I * mu_a,
            -I * (p.lambda_aa * a * a - omega1 * b));
  put_block(j, A, B, I * omega1 * std::conj(a), 0.0);
  put_block(j, A, G, -I * p.lambda_ag * std::conj(g) * a, -I * p.lambda_ag * g * a);

  put_block(j, B, A, I * omega1 * a, 0.0);
  put_block(j, B, B, -I * Amplitude{p.delta1, -0.5 * p.gamma_b} + I * (2.0 * mu_a), 0.0);
  put_block(j, B, G, I * (0.5 * omega2), 0.0);

  put_block(j, G, A, -I * p.lambda_ag * std::conj(a) * g, -I * p.lambda_ag * a * g);
  put_block(j, G, B, I * (0.5 * omega2), 0.0);
  put_block(j, G, G, -I * (p.lambda_ag * na + 2.0 * p.lambda_gg * ng + delta) + I * (2.0 * mu_a),
            -I * p.lambda_gg * g * g);
  return j;
}

Jacobian analytic_jacobian_at_cpt(const SystemParams& params, double omega1, double omega2,
                                  const LinearizeOptions& options) {
  const SystemParams p = lossless_unless(params, options.include_loss);
  const CptPoint cpt = cpt_state(omega1, omega2, p);
  return analytic_jacobian(StateVector{cpt.amp_a, Amplitude{}, cpt.amp_g, 0.0}, p, omega1, omega2,
                           cpt.delta, cpt.mu_a);
}

StabilityResult classify_jacobian(const Jacobian& jacobian, double omega0) {
  Eigen::EigenSolver<Jacobian> solver(jacobian, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("classify: eigensolver did not converge");
  }
  StabilityResult result;
  double growth = 0.0;
  for (int k = 0; k < 6; ++k) {
    const std::complex<double> lambda = solver.eigenvalues()(k);
    result.eigenfrequencies[static_cast<std::size_t>(k)] = I * lambda;
    growth = std::max(growth, lambda.real());
  }
  result.max_growth_rate = growth;
  result.unstable = growth > kGrowthThreshold * omega0;
  return result;
}

StabilityResult classify(const SystemParams& params, double omega1, double omega2,
                         const LinearizeOptions& options) {
  return classify_jacobian(linearize_at_cpt(params, omega1, omega2, options), params.omega0);
}

StabilityMap stability_map(const SystemParams& params, const std::vector<double>& ratio_axis,
                           const std::vector<double>& detuning_axis, unsigned threads,
                           const LinearizeOptions& options) {
  params.validate();
  require_axis(ratio_axis, "ratio axis");
  require_axis(detuning_axis, "detuning axis");
  if (!(ratio_axis.front() > 0.0)) throw DomainError("stability_map: ratios must be positive");

  StabilityMap map;
  map.ratio_axis = ratio_axis;
  map.detuning_axis = detuning_axis;
  map.cells.resize(ratio_axis.size() * detuning_axis.size());

  const double omega1 = params.omega0;
  const std::size_t nr = ratio_axis.size();
  parallel_for(map.cells.size(), threads, [&](std::size_t idx) {
    SystemParams cell = params;
    cell.delta1 = detuning_axis[idx / nr] * omega1;
    map.cells[idx] = classify(cell, omega1, ratio_axis[idx % nr] * omega1, options);
  });
  return map;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

}  // namespace stirap
