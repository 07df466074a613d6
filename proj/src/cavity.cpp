#include "dicke/cavity.hpp"

#include <cmath>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "dicke/integrator.hpp"
#include "dicke/spin_space.hpp"

namespace dicke {

namespace {

Eigen::SparseMatrix<Complex> fock_annihilation(int n_max) {
  Eigen::SparseMatrix<Complex> a(n_max, n_max);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int n = 1; n < n_max; ++n)
    trip.emplace_back(n - 1, n, Complex(std::sqrt(double(n)), 0.0));
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

Eigen::SparseMatrix<Complex> sparse_of(const Eigen::MatrixXcd& dense) {
  return dense.sparseView(1.0, 1e-300);
}

// Joint observables of a state on the spin (x) Fock space.
struct JointObservables {
  double sz, sx, x_quad, photons;
  Complex a_mean;
};

JointObservables joint_observables(const JointOperators& ops,
                                   const Eigen::MatrixXcd& rho) {
  const int n_spin = ops.n_atoms + 1;
  const double spin = 0.5 * ops.n_atoms;
  const LadderCoefficients f(ops.n_atoms);

  JointObservables obs{0.0, 0.0, 0.0, 0.0, {0.0, 0.0}};
  auto idx = [&](int m, int n) { return m * ops.n_max + n; };
  for (int m = 0; m < n_spin; ++m)
    for (int n = 0; n < ops.n_max; ++n) {
      const double p = rho(idx(m, n), idx(m, n)).real();
      obs.sz += (double(m) - spin) * p;
      obs.photons += double(n) * p;
      if (m < ops.n_atoms)
        obs.sx += f(m) * rho(idx(m + 1, n), idx(m, n)).real();
      if (n + 1 < ops.n_max)
        obs.a_mean += std::sqrt(double(n + 1)) * rho(idx(m, n + 1), idx(m, n));
    }
  obs.x_quad = 2.0 * obs.a_mean.real();
  return obs;
}

}  // namespace

JointOperators joint_operators(const ModelParams& params, int n_max) {
  params.validate();
  if (n_max < 2) throw std::invalid_argument("joint_operators: n_max must be >= 2");
  if (n_max > 256) throw resource_error("joint_operators caps at n_max = 256");

  const int n_spin = params.n_atoms + 1;
  JointOperators ops;
  ops.n_atoms = params.n_atoms;
  ops.n_max = n_max;
  ops.dim = n_spin * n_max;

  const Eigen::SparseMatrix<Complex> id_spin =
      sparse_of(Eigen::MatrixXcd::Identity(n_spin, n_spin));
  Eigen::SparseMatrix<Complex> id_fock(n_max, n_max);
  id_fock.setIdentity();

  const Eigen::SparseMatrix<Complex> a_f = fock_annihilation(n_max);
  const Eigen::SparseMatrix<Complex> x_f =
      a_f + Eigen::SparseMatrix<Complex>(a_f.adjoint());
  const Eigen::SparseMatrix<Complex> ada_f =
      Eigen::SparseMatrix<Complex>(a_f.adjoint()) * a_f;

  ops.a = Eigen::kroneckerProduct(id_spin, a_f);
  ops.ada = Eigen::kroneckerProduct(id_spin, ada_f);
  ops.h = params.omega0 *
              Eigen::kroneckerProduct(sparse_of(sz_matrix(params.n_atoms)), id_fock) +
          params.omega * ops.ada +
          2.0 * params.g *
              Eigen::kroneckerProduct(sparse_of(sx_matrix(params.n_atoms)), x_f);
  ops.h.makeCompressed();
  ops.a.makeCompressed();
  ops.ada.makeCompressed();
  return ops;
}

Eigen::MatrixXcd joint_generator_apply(const JointOperators& ops, double kappa,
                                       const Eigen::MatrixXcd& rho) {
  const Complex i(0.0, 1.0);
  Eigen::MatrixXcd out = -i * (ops.h * rho - rho * ops.h);
  out += kappa * (2.0 * (ops.a * rho * ops.a.adjoint()) -
                  (ops.ada * rho + rho * ops.ada));
  return out;
}

namespace {

// Vectorized joint Liouvillian, column-stacking convention
// vec(X rho Y) = (Y^T kron X) vec(rho).
Eigen::SparseMatrix<Complex> joint_liouvillian(const JointOperators& ops,
                                               double kappa) {
  const int d = ops.dim;
  Eigen::SparseMatrix<Complex> id(d, d);
  id.setIdentity();
  const Complex i(0.0, 1.0);
  const Eigen::SparseMatrix<Complex> ht = ops.h.transpose();
  const Eigen::SparseMatrix<Complex> a_conj = ops.a.conjugate();
  const Eigen::SparseMatrix<Complex> adat = ops.ada.transpose();

  Eigen::SparseMatrix<Complex> lv =
      -i * (Eigen::kroneckerProduct(id, ops.h) - Eigen::kroneckerProduct(ht, id)).eval();
  lv = lv + kappa * (2.0 * Eigen::kroneckerProduct(a_conj, ops.a) -
                     Eigen::kroneckerProduct(id, ops.ada) -
                     Eigen::kroneckerProduct(adat, id))
                .eval();
  lv.makeCompressed();
  return lv;
}

struct SolveOutcome {
  JointObservables obs;
  double residual;
};

SolveOutcome solve_joint_steady(const JointOperators& ops, double kappa) {
  const int d = ops.dim;
  const long size = long(d) * d;
  if (size > 60000)
    throw resource_error("oracle steady state: vectorized dimension " +
                         std::to_string(size) + " exceeds the direct-solve cap");

  Eigen::SparseMatrix<Complex> lv = joint_liouvillian(ops, kappa);

  // Replace the last diagonal-element row by the trace row.
  const int trace_row = (d - 1) * d + (d - 1);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(lv.nonZeros() + d);
  for (int col = 0; col < lv.outerSize(); ++col)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(lv, col); it; ++it)
      if (int(it.row()) != trace_row)
        trip.emplace_back(int(it.row()), col, it.value());
  for (int k = 0; k < d; ++k)
    trip.emplace_back(trace_row, k * d + k, Complex(1.0, 0.0));
  const int isize = static_cast<int>(size);
  Eigen::SparseMatrix<Complex> aug(isize, isize);
  aug.setFromTriplets(trip.begin(), trip.end());
  aug.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(aug);
  if (lu.info() != Eigen::Success)
    throw numerical_error("oracle steady state: LU factorization failed");
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(size);
  b(trace_row) = 1.0;
  Eigen::VectorXcd x = lu.solve(b);
  if (lu.info() != Eigen::Success)
    throw numerical_error("oracle steady state: solve failed");

  Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();

  SolveOutcome out{joint_observables(ops, rho), 0.0};
  Eigen::VectorXcd rv = Eigen::Map<const Eigen::VectorXcd>(rho.data(), size);
  out.residual = (lv * rv).norm();
  return out;
}

}  // namespace

OracleSteadyResult oracle_steady_state(const ModelParams& params,
                                       const CutoffPolicy& policy) {
  params.validate();
  if (!(params.g > 0.0))
    throw std::invalid_argument(
        "oracle_steady_state: g = 0 is degenerate (no spin relaxation channel)");
  if (params.n_atoms > 6)
    throw resource_error("oracle_steady_state caps at N = 6");

  int n_max = policy.n_max_initial;
  if (n_max <= 0) {
    bool above = false;
    if (params.omega > 0.0 && params.omega0 > 0.0)
      above = params.g_sqrt_n() >= critical_coupling_sqrt_n(params);
    n_max = above ? 16 : 8;
  }

  SolveOutcome prev = solve_joint_steady(joint_operators(params, n_max), params.kappa);
  while (2 * n_max <= policy.n_max_cap) {
    const int next = 2 * n_max;
    const SolveOutcome cur =
        solve_joint_steady(joint_operators(params, next), params.kappa);
    const double shift = std::max(
        {std::abs(cur.obs.sz - prev.obs.sz), std::abs(cur.obs.sx - prev.obs.sx),
         std::abs(cur.obs.photons - prev.obs.photons),
         std::abs(cur.obs.x_quad - prev.obs.x_quad)});
    if (shift < policy.shift_tol) {
      OracleSteadyResult res;
      res.sz = cur.obs.sz;
      res.sx = cur.obs.sx;
      res.x_quad = cur.obs.x_quad;
      res.photons = cur.obs.photons;
      res.a_mean = cur.obs.a_mean;
      res.n_max = next;
      res.residual = cur.residual;
      return res;
    }
    prev = cur;
    n_max = next;
  }
  throw numerical_error("oracle_steady_state: cutoff did not converge below n_max = " +
                        std::to_string(policy.n_max_cap));
}

std::vector<Complex> cavity_correlation_series(const ModelParams& params,
                                               const std::vector<double>& taus) {
  if (params.g != 0.0)
    throw std::invalid_argument("cavity_correlation requires g = 0 (bare cavity)");
  for (double tau : taus)
    if (tau < 0.0)
      throw std::invalid_argument("cavity_correlation_series: taus must be >= 0");

  const int n_max = 8;
  const Eigen::SparseMatrix<Complex> a = fock_annihilation(n_max);
  const Eigen::SparseMatrix<Complex> x =
      a + Eigen::SparseMatrix<Complex>(a.adjoint());
  const Eigen::SparseMatrix<Complex> ada =
      Eigen::SparseMatrix<Complex>(a.adjoint()) * a;

  // Quantum regression: evolve sigma(0) = X |0><0| under the bare-cavity
  // Liouvillian and read off Tr(X sigma(tau)).
  Eigen::MatrixXcd sigma0 = Eigen::MatrixXcd::Zero(n_max, n_max);
  sigma0(1, 0) = 1.0;

  auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) {
    Eigen::Map<const Eigen::MatrixXcd> s(y.data(), n_max, n_max);
    Eigen::Map<Eigen::MatrixXcd> out(dydt.data(), n_max, n_max);
    const Complex i(0.0, 1.0);
    out = -i * params.omega * (ada * s - s * ada) +
          params.kappa * (2.0 * (a * s * Eigen::MatrixXcd(a.adjoint().eval())) -
                          (ada * s + s * ada));
  };

  for (size_t k = 1; k < taus.size(); ++k)
    if (taus[k] < taus[k - 1])
      throw std::invalid_argument("cavity_correlation_series: taus must ascend");

  std::vector<Complex> values(taus.size());
  size_t cursor = 0;
  auto record = [&](double, const Eigen::VectorXcd& y) {
    Eigen::Map<const Eigen::MatrixXcd> s(y.data(), n_max, n_max);
    Complex c(0.0, 0.0);
    for (int n = 0; n + 1 < n_max; ++n)
      c += std::sqrt(double(n + 1)) * (s(n, n + 1) + s(n + 1, n));
    values[cursor++] = c;
  };

  Eigen::VectorXcd y =
      Eigen::Map<const Eigen::VectorXcd>(sigma0.data(), n_max * n_max);
  IntegratorOptions opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-14;
  double t_end = taus.empty() ? 0.0 : taus.back();
  if (t_end <= 0.0) {
    // Only tau = 0 requested.
    for (size_t k = 0; k < taus.size(); ++k) values[k] = Complex(1.0, 0.0);
    return values;
  }
  integrate_dopri5(rhs, y, 0.0, t_end, taus, record, opts);
  return values;
}

Complex cavity_correlation(const ModelParams& params, double tau) {
  if (tau < 0.0) return std::conj(cavity_correlation(params, -tau));
  return cavity_correlation_series(params, {tau}).front();
}

OracleRingDown oracle_ring_down(const ModelParams& params, double tilt,
                                double t_final, int n_samples, int n_max,
                                double rel_tol) {
  const JointOperators ops = joint_operators(params, n_max);
  const int d = ops.dim;

  // Tilted all-down spin state, cavity vacuum.
  const Eigen::VectorXcd spin_psi = down_state(params.n_atoms, tilt);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
  for (int m = 0; m <= params.n_atoms; ++m) psi(m * n_max) = spin_psi(m);
  Eigen::MatrixXcd rho0 = psi * psi.adjoint();

  std::vector<double> grid(n_samples);
  for (int k = 0; k < n_samples; ++k)
    grid[k] = t_final * double(k) / double(n_samples - 1);

  OracleRingDown out;
  out.n_max = n_max;
  auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) {
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), d, d);
    Eigen::Map<Eigen::MatrixXcd> dst(dydt.data(), d, d);
    const Complex i(0.0, 1.0);
    dst = -i * (ops.h * rho - rho * ops.h);
    dst += params.kappa * (2.0 * (ops.a * rho * Eigen::MatrixXcd(ops.a.adjoint().eval())) -
                           (ops.ada * rho + rho * ops.ada));
  };
  auto sample = [&](double t, const Eigen::VectorXcd& y) {
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), d, d);
    out.t.push_back(t);
    out.sx.push_back(joint_observables(ops, rho).sx);
  };

  Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  IntegratorOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-13;
  integrate_dopri5(rhs, y, 0.0, t_final, grid, sample, opts);
  return out;
}

DampingFit oracle_decay_rates(const ModelParams& params, double tilt,
                              double t_final, int n_samples) {
  params.validate();
  if (params.n_atoms > 6)
    throw resource_error("oracle_decay_rates caps at N = 6");
  const double gcn = critical_coupling_sqrt_n(params);
  if (!(params.g_sqrt_n() < gcn))
    throw std::invalid_argument("oracle_decay_rates requires g < g_c");

  if (t_final <= 0.0) {
    // Long enough for >= 4 oscillation periods of the expected ring-down.
    const double ratio = params.g_sqrt_n() / gcn;
    const double freq =
        params.omega0 * std::sqrt(std::max(1.0 - ratio * ratio, 0.05));
    t_final = std::min(4.0 * 2.0 * M_PI / freq, 2000.0);
  }

  int n_max = 8;
  OracleRingDown run = oracle_ring_down(params, tilt, t_final, n_samples, n_max);
  DampingFit fit = fit_damping(run.t, run.sx);
  while (2 * n_max <= 64) {
    const int next = 2 * n_max;
    const OracleRingDown run2 =
        oracle_ring_down(params, tilt, t_final, n_samples, next);
    const DampingFit fit2 = fit_damping(run2.t, run2.sx);
    if (std::abs(fit2.decay_rate - fit.decay_rate) <
        1e-3 * std::abs(fit.decay_rate))
      return fit2;
    fit = fit2;
    n_max = next;
  }
  throw numerical_error("oracle_decay_rates: fitted rate did not converge in n_max");
}

}  // namespace dicke
