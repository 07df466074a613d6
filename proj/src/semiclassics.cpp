#include "dicke/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dicke {

const char* to_string(FixedPointKind kind) {
  return kind == FixedPointKind::Normal ? "normal" : "superradiant";
}

const char* to_string(StabilityClass cls) {
  switch (cls) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Unstable: return "unstable";
    case StabilityClass::Marginal: return "marginal";
  }
  return "?";
}

CollectiveRates rates_large_detuning_approx(const ModelParams& params) {
  const double g2 = params.g * params.g;
  const double w = params.omega, k = params.kappa;
  const double wk2 = w * w + k * k;
  CollectiveRates r;
  r.q0_im = -g2 * w / wk2;
  r.q1_re = -2.0 * g2 * k * w * params.omega0 / (wk2 * wk2);
  return r;
}

CollectiveRates collective_rates(const ModelParams& params, RateChoice choice) {
  if (choice == RateChoice::LargeDetuningApprox)
    return rates_large_detuning_approx(params);
  const RateSet rates = compute_rates(params);
  return CollectiveRates{rates.q0().imag(), rates.q1().real()};
}

FullState flow_full_model(const FullState& state, const ModelParams& params) {
  const double field = 2.0 * state.a.real();  // <a> + <a*>
  const double g = params.g;
  FullState d;
  d.spin.sx = -params.omega0 * state.spin.sy;
  d.spin.sy = params.omega0 * state.spin.sx - 2.0 * g * field * state.spin.sz;
  d.spin.sz = 2.0 * g * field * state.spin.sy;
  d.a = -Complex(params.kappa, params.omega) * state.a -
        Complex(0.0, 2.0 * g) * state.spin.sx;
  return d;
}

SpinVector flow_collective(const SpinVector& s, double omega0,
                           const CollectiveRates& r) {
  SpinVector d;
  d.sx = -omega0 * s.sy;
  d.sy = omega0 * s.sx - 8.0 * r.q0_im * s.sz * s.sx - 8.0 * r.q1_re * s.sz * s.sy;
  d.sz = 8.0 * r.q0_im * s.sx * s.sy + 8.0 * r.q1_re * s.sy * s.sy;
  return d;
}

SpinVector flow_secular(const SpinVector& s, const ModelParams& params,
                        bool include_subleading_sz) {
  const RateSet rates = compute_rates(params);
  const double qpr = rates.q_plus.real(), qmr = rates.q_minus.real();
  const double spin = params.spin();

  // d<S->/dt = -(i w0 + D) <S-> + 2 D <Sz><S->, D = Q- - Q+*.
  const Complex dcoef = rates.q_minus - std::conj(rates.q_plus);
  const Complex w(s.sx, -s.sy);
  const Complex dw = (-Complex(0.0, params.omega0) - dcoef +
                      2.0 * dcoef * s.sz) * w;

  SpinVector d;
  d.sx = dw.real();
  d.sy = -dw.imag();
  d.sz = 2.0 * (qpr - qmr) * (spin * spin - s.sz * s.sz);
  if (include_subleading_sz) d.sz -= 2.0 * (qpr + qmr) * s.sz;
  return d;
}

SpinVector flow_atom_only(const SpinVector& s, const ModelParams& params,
                          FlowKind kind, RateChoice choice,
                          bool include_subleading_sz) {
  switch (kind) {
    case FlowKind::Full:
      return flow_collective(s, params.omega0, collective_rates(params, choice));
    case FlowKind::Secular:
      return flow_secular(s, params, include_subleading_sz);
    case FlowKind::NaiveElimination: {
      // Conservative flow of w0 Sz - (4 g^2 w / (w^2 + k^2)) (Sx)^2: the
      // collective flow with the approximate Q0'' and no Q1' damping.
      CollectiveRates r = rates_large_detuning_approx(params);
      r.q1_re = 0.0;
      return flow_collective(s, params.omega0, r);
    }
  }
  throw std::invalid_argument("flow_atom_only: bad kind");
}

namespace {

// Eigenvalues of the 2x2 stability block at a polar state (0, 0, sz0):
// lambda = -4 q1 sz0 +- sqrt((4 q1 sz0)^2 - w0 (w0 - 8 q0 sz0)).
std::array<Complex, 2> polar_eigenvalues(double omega0, double sz0,
                                         const CollectiveRates& r) {
  const double half_tr = -4.0 * r.q1_re * sz0;
  const double det = omega0 * (omega0 - 8.0 * r.q0_im * sz0);
  const Complex s = std::sqrt(Complex(half_tr * half_tr - det, 0.0));
  return {half_tr + s, half_tr - s};
}

// Superradiant block: lambda = -4 q1 sz +- sqrt((4 q1 sz)^2 - (8 q0 sx)^2).
std::array<Complex, 2> superradiant_eigenvalues(const SpinVector& p,
                                                const CollectiveRates& r) {
  const double half_tr = -4.0 * r.q1_re * p.sz;
  const double b = 8.0 * r.q0_im * p.sx;
  const Complex s = std::sqrt(Complex(half_tr * half_tr - b * b, 0.0));
  return {half_tr + s, half_tr - s};
}

StabilityClass classify(const std::array<Complex, 2>& eigenvalues, double scale) {
  const double eps = 1e-12 * std::max(scale, 1e-300);
  const double re_max = std::max(eigenvalues[0].real(), eigenvalues[1].real());
  if (re_max > eps) return StabilityClass::Unstable;
  if (re_max < -eps) return StabilityClass::Stable;
  return StabilityClass::Marginal;
}

}  // namespace

double superradiant_threshold_sqrt_n(const ModelParams& params, RateChoice choice) {
  if (!(params.omega > 0.0))
    throw std::invalid_argument("superradiant threshold requires omega > 0");
  if (!(params.omega0 > 0.0))
    throw std::invalid_argument("superradiant threshold requires omega0 > 0");
  // The pair appears when 4 N |Q0''(g)| = omega0; |Q0''| is proportional to
  // g^2, so the threshold is closed-form for either rate choice.
  ModelParams unit = params;
  unit.g = 1.0;
  const double slope = -collective_rates(unit, choice).q0_im;  // |Q0''| at g = 1
  if (!(slope > 0.0))
    throw std::invalid_argument("superradiant threshold requires omega > 0");
  return std::sqrt(params.omega0 / (4.0 * slope));
}

std::vector<FixedPoint> fixed_points(const ModelParams& params, RateChoice choice) {
  params.validate();
  if (!(params.omega > 0.0))
    throw std::invalid_argument(
        "fixed_points: omega <= 0 admits no superradiant transition");
  if (!(params.omega0 > 0.0))
    throw std::invalid_argument("fixed_points: omega0 must be > 0");

  const double ell = params.spin();
  const CollectiveRates r = collective_rates(params, choice);
  const double freq_scale = params.omega0 + 8.0 * (std::abs(r.q0_im) +
                                                   std::abs(r.q1_re)) * ell;

  std::vector<FixedPoint> points;
  FixedPoint down{{0.0, 0.0, -ell}, FixedPointKind::Normal, StabilityClass::Marginal};
  down.stability = classify(polar_eigenvalues(params.omega0, -ell, r), freq_scale);
  FixedPoint up{{0.0, 0.0, ell}, FixedPointKind::Normal, StabilityClass::Marginal};
  up.stability = classify(polar_eigenvalues(params.omega0, ell, r), freq_scale);
  points.push_back(down);
  points.push_back(up);

  if (r.q0_im < 0.0) {
    const double sz_ss = params.omega0 / (8.0 * r.q0_im);  // negative
    if (std::abs(sz_ss) < ell * (1.0 - 1e-12)) {
      const double sx_ss = std::sqrt(ell * ell - sz_ss * sz_ss);
      for (double sign : {1.0, -1.0}) {
        FixedPoint sr{{sign * sx_ss, 0.0, sz_ss}, FixedPointKind::Superradiant,
                      StabilityClass::Marginal};
        sr.stability = classify(superradiant_eigenvalues(sr.spin, r), freq_scale);
        points.push_back(sr);
      }
    }
  }
  return points;
}

Eigen::Matrix3d analytic_jacobian(const SpinVector& s, double omega0,
                                  const CollectiveRates& r) {
  Eigen::Matrix3d j;
  j << 0.0, -omega0, 0.0,
      omega0 - 8.0 * r.q0_im * s.sz, -8.0 * r.q1_re * s.sz,
      -8.0 * r.q0_im * s.sx - 8.0 * r.q1_re * s.sy,
      8.0 * r.q0_im * s.sy, 8.0 * r.q0_im * s.sx + 16.0 * r.q1_re * s.sy, 0.0;
  return j;
}

Eigen::Matrix3d numerical_jacobian(const SpinVector& s, double omega0,
                                   const CollectiveRates& r, double scale) {
  const double h = 1e-6 * std::max(scale, 1.0);
  Eigen::Matrix3d j;
  for (int col = 0; col < 3; ++col) {
    SpinVector plus = s, minus = s;
    double* pp = col == 0 ? &plus.sx : col == 1 ? &plus.sy : &plus.sz;
    double* pm = col == 0 ? &minus.sx : col == 1 ? &minus.sy : &minus.sz;
    *pp += h;
    *pm -= h;
    const SpinVector fp = flow_collective(plus, omega0, r);
    const SpinVector fm = flow_collective(minus, omega0, r);
    j(0, col) = (fp.sx - fm.sx) / (2.0 * h);
    j(1, col) = (fp.sy - fm.sy) / (2.0 * h);
    j(2, col) = (fp.sz - fm.sz) / (2.0 * h);
  }
  return j;
}

StabilityReport stability(const ModelParams& params, const SpinVector& point,
                          RateChoice choice) {
  params.validate();
  const double ell = params.spin();
  const CollectiveRates r = collective_rates(params, choice);

  const SpinVector flow = flow_collective(point, params.omega0, r);
  const double flow_scale =
      (params.omega0 + 8.0 * (std::abs(r.q0_im) + std::abs(r.q1_re)) * ell) * ell;
  const double flow_norm =
      std::sqrt(flow.sx * flow.sx + flow.sy * flow.sy + flow.sz * flow.sz);
  if (flow_norm > 1e-10 * std::max(flow_scale, 1.0))
    throw std::invalid_argument(
        "stability: point is not a fixed point of the collective flow "
        "(|flow| = " + std::to_string(flow_norm) + ")");

  StabilityReport report;
  report.kind = std::abs(point.sx) > 1e-8 * std::max(ell, 1.0)
                    ? FixedPointKind::Superradiant
                    : FixedPointKind::Normal;
  report.closed_form = report.kind == FixedPointKind::Superradiant
                           ? superradiant_eigenvalues(point, r)
                           : polar_eigenvalues(params.omega0, point.sz, r);

  const Eigen::Matrix3d jac = numerical_jacobian(point, params.omega0, r, ell);
  Eigen::EigenSolver<Eigen::Matrix3d> es(jac);
  for (int k = 0; k < 3; ++k) report.jacobian_eigenvalues[k] = es.eigenvalues()(k);

  const double freq_scale = params.omega0 + 8.0 * (std::abs(r.q0_im) +
                                                   std::abs(r.q1_re)) * ell;
  double max_dev = 0.0;
  for (const Complex& lam : report.closed_form) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& mu : report.jacobian_eigenvalues)
      best = std::min(best, std::abs(lam - mu));
    max_dev = std::max(max_dev, best / std::max(std::abs(lam), 1e-9 * freq_scale));
  }
  report.max_rel_deviation = max_dev;
  report.stability = classify(report.closed_form, freq_scale);
  return report;
}

double brillouin(double spin, double x) {
  if (!(spin > 0.0)) throw std::invalid_argument("brillouin: spin must be > 0");
  if (std::abs(x) < 1e-4) return (spin + 1.0) * x / (3.0 * spin);
  const double a = (2.0 * spin + 1.0) / (2.0 * spin);
  const double b = 1.0 / (2.0 * spin);
  return a / std::tanh(a * x) - b / std::tanh(b * x);
}

ThermodynamicSign secular_sz_thermodynamic(const ModelParams& params) {
  params.validate();
  // Q+'/Q-' = (k^2 + (w - w0)^2) / (k^2 + (w + w0)^2); g^2 cancels, so the
  // selected pole never depends on the magnitude of g.
  const double k2 = params.kappa * params.kappa;
  const double up = k2 + (params.omega - params.omega0) * (params.omega - params.omega0);
  const double dn = k2 + (params.omega + params.omega0) * (params.omega + params.omega0);
  const double ratio = up / dn;

  ThermodynamicSign result;
  result.crossover = std::abs(ratio - 1.0) <= 1.0 / params.spin();
  if (ratio > 1.0) result.sign = 1;
  else if (ratio < 1.0) result.sign = -1;
  else result.sign = 0;
  return result;
}

double semiclassical_steady_sz_scaled(const ModelParams& params) {
  const double gcn = critical_coupling_sqrt_n(params);
  const double gn = params.g_sqrt_n();
  if (gn <= gcn) return -1.0;
  return -(gcn * gcn) / (gn * gn);
}

bool on_spin_sphere(const SpinVector& s, int n_atoms) {
  const double ell = 0.5 * n_atoms;
  return std::abs(s.length() - ell) <= 1e-9 * ell;
}

}  // namespace dicke
