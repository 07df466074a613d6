#include "dicke/evolution.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "dicke/integrator.hpp"

namespace dicke {

DickeDensityMatrix DickeDensityMatrix::from_matrix(Eigen::MatrixXcd rho,
                                                   double tol) {
  if (rho.rows() != rho.cols() || rho.rows() < 2)
    throw std::invalid_argument("density matrix must be square with dim >= 2");
  if (hermiticity_drift(rho) > tol)
    throw std::invalid_argument("density matrix is not Hermitian to tolerance");
  if (trace_error(rho) > tol)
    throw std::invalid_argument("density matrix trace differs from 1 beyond tolerance");
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DickeDensityMatrix{std::move(rho)};
}

DickeDensityMatrix DickeDensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double nrm = psi.norm();
  if (nrm == 0.0) throw std::invalid_argument("state vector must be nonzero");
  Eigen::VectorXcd u = psi / nrm;
  return DickeDensityMatrix{u * u.adjoint()};
}

DickeDensityMatrix DickeDensityMatrix::maximally_mixed(int n_atoms) {
  const int dim = n_atoms + 1;
  return DickeDensityMatrix{Eigen::MatrixXcd::Identity(dim, dim) / double(dim)};
}

DickeDensityMatrix DickeDensityMatrix::ground(int n_atoms, double tilt_angle) {
  return pure(down_state(n_atoms, tilt_angle));
}

EvolutionResult evolve(const GeneratorSpec& spec, const DickeDensityMatrix& rho0,
                       const EvolveOptions& opts) {
  if (rho0.n_atoms() != spec.n_atoms)
    throw std::invalid_argument("evolve: initial state has wrong dimension");
  if (!(opts.t_final > 0.0))
    throw std::invalid_argument("evolve: t_final must be > 0");
  if (opts.n_samples < 2)
    throw std::invalid_argument("evolve: need at least 2 samples");

  const int dim = spec.dim();
  const LadderCoefficients f(spec.n_atoms);

  std::vector<double> grid(opts.n_samples);
  for (int k = 0; k < opts.n_samples; ++k)
    grid[k] = opts.t_final * double(k) / double(opts.n_samples - 1);

  EvolutionResult res;
  res.n_atoms = spec.n_atoms;
  res.t.reserve(grid.size());

  auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) {
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXcd> out(dydt.data(), dim, dim);
    apply_generator_kernel(spec, f, rho, out);
  };

  auto sample = [&](double t, const Eigen::VectorXcd& y) {
    Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    const Observables obs = spin_observables(rho);
    res.t.push_back(t);
    res.sx.push_back(obs.sx);
    res.sy.push_back(obs.sy);
    res.sz.push_back(obs.sz);
    res.sz2.push_back(obs.sz2);
    res.purity.push_back(obs.purity);
    res.min_eig.push_back(obs.min_eig);
    const double terr = trace_error(rho);
    res.trace_err.push_back(terr);
    if (terr > opts.trace_flag_tol) res.trace_flagged = true;
  };

  auto post_step = [&](double t, Eigen::VectorXcd& y) {
    Eigen::Map<Eigen::MatrixXcd> rho(y.data(), dim, dim);
    if (hermiticity_drift(rho) > opts.herm_drift_tol) {
      rho = 0.5 * (rho + rho.adjoint()).eval();
      res.resym_times.push_back(t);
      return true;
    }
    return false;
  };

  Eigen::VectorXcd y =
      Eigen::Map<const Eigen::VectorXcd>(rho0.rho.data(), dim * dim);
  IntegratorOptions iopts;
  iopts.rel_tol = opts.rel_tol;
  iopts.abs_tol = opts.abs_tol;
  integrate_dopri5(rhs, y, 0.0, opts.t_final, grid, sample, iopts, post_step);

  res.rho_final = Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim);
  return res;
}

SteadyStateResult steady_state(const GeneratorSpec& spec,
                               const SteadyStateOptions& opts) {
  VectorizedGenerator gen = vectorized_generator(spec);
  const int size = gen.size();

  SteadyStateResult res;
  res.generator_norm = gen.matrix.norm();

  const double rate_scale =
      std::abs(spec.rates.q_plus) + std::abs(spec.rates.q_minus);
  if (rate_scale == 0.0) {
    // g = 0: no dissipative channel, every diagonal state is stationary.
    // Return the lowest-residual trace-normalized representative, flagged.
    res.degenerate = true;
    res.rho = Eigen::MatrixXcd::Identity(spec.dim(), spec.dim()) / double(spec.dim());
    res.obs = spin_observables(res.rho);
    res.residual = (gen.matrix * to_sector_vector(gen, res.rho)).norm();
    return res;
  }

  // Trace-augmented system: the population rows of L sum to zero, so the
  // last one is redundant and is replaced by the normalization row.
  const int trace_row = gen.population_rows.back();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(gen.matrix.nonZeros() + gen.population_rows.size());
  for (int col = 0; col < gen.matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(gen.matrix, col); it; ++it)
      if (int(it.row()) != trace_row)
        triplets.emplace_back(int(it.row()), col, it.value());
  for (int p : gen.population_rows)
    triplets.emplace_back(trace_row, p, Complex(1.0, 0.0));

  Eigen::SparseMatrix<Complex> aug(size, size);
  aug.setFromTriplets(triplets.begin(), triplets.end());
  aug.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(aug);
  if (lu.info() != Eigen::Success)
    throw numerical_error("steady_state: sparse LU factorization failed");
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(size);
  b(trace_row) = 1.0;
  Eigen::VectorXcd x = lu.solve(b);
  if (lu.info() != Eigen::Success)
    throw numerical_error("steady_state: sparse solve failed");

  Eigen::MatrixXcd rho = from_sector_vector(gen, x);
  rho = 0.5 * (rho + rho.adjoint().eval());
  const double tr = rho.trace().real();
  if (!(std::abs(tr) > 0.0))
    throw numerical_error("steady_state: solution has zero trace");
  rho /= tr;

  res.rho = rho;
  res.residual = (gen.matrix * to_sector_vector(gen, rho)).norm();
  res.obs = spin_observables(rho);
  if (res.residual > opts.residual_tol * res.generator_norm)
    throw numerical_error("steady_state: residual " + std::to_string(res.residual) +
                          " exceeds " + std::to_string(opts.residual_tol) +
                          " * ||L|| = " +
                          std::to_string(opts.residual_tol * res.generator_norm));
  return res;
}

Observables steady_state_by_evolution(const GeneratorSpec& spec, double t_final,
                                      double rel_tol) {
  EvolveOptions opts;
  opts.t_final = t_final;
  opts.n_samples = 2;
  opts.rel_tol = rel_tol;
  const EvolutionResult res =
      evolve(spec, DickeDensityMatrix::ground(spec.n_atoms, 1e-3), opts);
  return spin_observables(res.rho_final);
}

DampingFit fit_damping(const EvolutionResult& series, const std::string& observable) {
  const std::vector<double>* y = nullptr;
  if (observable == "sx") y = &series.sx;
  else if (observable == "sy") y = &series.sy;
  else if (observable == "sz") y = &series.sz;
  else
    throw std::invalid_argument("fit_damping: unknown observable '" + observable +
                                "' (expected sx, sy, sz)");
  return fit_damping(series.t, *y);
}

}  // namespace dicke
