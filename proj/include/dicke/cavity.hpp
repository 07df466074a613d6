// cavity.hpp: brute-force master equation for the full atom+cavity model
// (Dicke spin sector tensored with a truncated Fock space). Ground truth for
// validating the atom-only Redfield description at small N.

#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dicke/evolution.hpp"
#include "dicke/model.hpp"

namespace dicke {

// Fock-cutoff growth policy: start at n_max_initial (0 = auto: 8 below
// threshold, 16 above), double until the reported observables shift by less
// than shift_tol, fail at n_max_cap.
struct CutoffPolicy {
  int n_max_initial = 0;
  int n_max_cap = 256;
  double shift_tol = 1e-8;
};

// Sparse operators on the joint space; index = m * n_max + n with m the
// Dicke slot and n the Fock occupation.
struct JointOperators {
  int n_atoms = 0;
  int n_max = 0;
  int dim = 0;
  Eigen::SparseMatrix<Complex> h;    // omega0 Sz + omega a'a + 2g Sx (a + a')
  Eigen::SparseMatrix<Complex> a;    // photon annihilation
  Eigen::SparseMatrix<Complex> ada;  // a'a
};

JointOperators joint_operators(const ModelParams& params, int n_max);

// drho/dt = -i[H, rho] + kappa (2 a rho a' - {a'a, rho})  (factor-2 Lindblad
// convention, so a bare photon population decays at rate 2 kappa).
Eigen::MatrixXcd joint_generator_apply(const JointOperators& ops, double kappa,
                                       const Eigen::MatrixXcd& rho);

struct OracleSteadyResult {
  double sz = 0.0;
  double sx = 0.0;
  double x_quad = 0.0;   // <a + a'>
  double photons = 0.0;  // <a'a>
  Complex a_mean{0.0, 0.0};
  int n_max = 0;         // cutoff at which the result converged
  double residual = 0.0;
};

// Cutoff-converged steady state by sparse null-space solve (long-time
// integration above the direct-solve size limit). Requires g > 0 (the g = 0
// limit is degenerate: no spin relaxation channel) and N <= 6.
OracleSteadyResult oracle_steady_state(const ModelParams& params,
                                       const CutoffPolicy& policy = {});

// Bare-cavity two-time correlator Tr(X(tau) X(0) rho_vac), X = a + a',
// evaluated by quantum regression on the truncated Fock space. Requires
// g = 0; equals exp(-i omega tau - kappa |tau|).
Complex cavity_correlation(const ModelParams& params, double tau);
std::vector<Complex> cavity_correlation_series(const ModelParams& params,
                                               const std::vector<double>& taus);

struct OracleRingDown {
  std::vector<double> t;
  std::vector<double> sx;
  int n_max = 0;
};

// <Sx>(t) from a small tilt of the all-down state with the cavity in vacuum.
OracleRingDown oracle_ring_down(const ModelParams& params, double tilt,
                                double t_final, int n_samples, int n_max,
                                double rel_tol = 1e-9);

// Ring-down fit of the joint model, with one cutoff doubling to confirm the
// fitted rate is converged. Requires g < g_c and N <= 6.
DampingFit oracle_decay_rates(const ModelParams& params, double tilt = 1e-3,
                              double t_final = 0.0, int n_samples = 1200);

}  // namespace dicke
