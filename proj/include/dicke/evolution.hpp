// evolution.hpp: time integration of the master equation, steady-state
// computation, and trajectory diagnostics (trace error, positivity,
// damping-rate fits).

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dicke/liouvillian.hpp"

namespace dicke {

// Validated density matrix in the Dicke basis. Hermiticity and unit trace
// are enforced on construction; positivity is deliberately NOT an invariant
// (the full Redfield generator may transiently violate it, and that is
// diagnosed rather than repaired).
struct DickeDensityMatrix {
  Eigen::MatrixXcd rho;

  static DickeDensityMatrix from_matrix(Eigen::MatrixXcd rho, double tol = 1e-9);
  static DickeDensityMatrix pure(const Eigen::VectorXcd& psi);
  static DickeDensityMatrix maximally_mixed(int n_atoms);
  // All spins down, tilted by tilt_angle about y to seed dynamics.
  static DickeDensityMatrix ground(int n_atoms, double tilt_angle = 0.0);

  int n_atoms() const { return int(rho.rows()) - 1; }
};

struct EvolveOptions {
  double t_final = 100.0;
  int n_samples = 201;   // uniform grid including both endpoints
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double herm_drift_tol = 1e-12;  // re-symmetrize and log above this
  double trace_flag_tol = 1e-7;
};

struct EvolutionResult {
  std::vector<double> t;
  std::vector<double> sx, sy, sz, sz2, purity, min_eig, trace_err;
  Eigen::MatrixXcd rho_final;
  std::vector<double> resym_times;  // logged hermiticity repairs
  bool trace_flagged = false;
  int n_atoms = 0;
};

// Adaptive integration of drho/dt = L(rho); throws numerical_error (with the
// time reached) on step-size underflow.
EvolutionResult evolve(const GeneratorSpec& spec, const DickeDensityMatrix& rho0,
                       const EvolveOptions& opts = {});

struct SteadyStateOptions {
  double residual_tol = 1e-10;  // residual below tol * ||L||_F required
};

struct SteadyStateResult {
  Eigen::MatrixXcd rho;
  Observables obs;
  double residual = 0.0;        // ||L rho_ss||_2 on the even parity sector
  double generator_norm = 0.0;  // Frobenius norm of the sparse generator
  bool degenerate = false;      // null space dimension > 1 (g = 0)
};

// Null vector of the vectorized generator on the population parity sector,
// via a trace-augmented sparse direct solve (one redundant population row is
// replaced by the trace-normalization row). At g = 0 the null space is
// degenerate: the result is flagged and the maximally mixed representative
// (residual 0) is returned.
SteadyStateResult steady_state(const GeneratorSpec& spec,
                               const SteadyStateOptions& opts = {});

// Long-time-integration fallback used to verify the direct solve.
Observables steady_state_by_evolution(const GeneratorSpec& spec, double t_final,
                                      double rel_tol = 1e-9);

struct DampingFit {
  double decay_rate = 0.0;  // lambda' (<= 0 for a stable attractor)
  double frequency = 0.0;   // |lambda''|
  double residual = 0.0;    // relative rms misfit
};

// Least-squares fit of A exp(lambda' t) cos(lambda'' t + phi) + c on a
// uniform time grid. The series must span >= 3 oscillation periods or
// >= 5 decay times; throws numerical_error otherwise, or when the fit does
// not converge (the residual is reported in the message).
DampingFit fit_damping(const std::vector<double>& t, const std::vector<double>& y);
DampingFit fit_damping(const EvolutionResult& series, const std::string& observable);

}  // namespace dicke
