// model.hpp: physical parameters, Redfield rate coefficients, the critical
// coupling, and the operator-form Hamiltonian / Kossakowski matrices.

#pragma once

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "dicke/errors.hpp"

namespace dicke {

using Complex = std::complex<double>;

// Approximation level of the atom-only master equation.
//   Full                  xi = 1, exact Q+-
//   Secular               xi = 0, exact Q+-
//   LargeDetuning         xi = 1, Q+- replaced by their mean Q0 (Q1 = 0)
//   SecularLargeDetuning  xi = 0, Q1 = 0
enum class Mode {
  Full,
  Secular,
  LargeDetuning,
  SecularLargeDetuning,
};

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);  // "full", "secular", ...

inline double mode_xi(Mode mode) {
  return (mode == Mode::Full || mode == Mode::LargeDetuning) ? 1.0 : 0.0;
}

inline bool mode_zeroes_q1(Mode mode) {
  return mode == Mode::LargeDetuning || mode == Mode::SecularLargeDetuning;
}

// The five physical numbers of a run, in units where omega = 1 by convention.
// All frequencies are angular.
struct ModelParams {
  double omega0 = 0.1;  // atomic level splitting
  double omega = 1.0;   // cavity detuning from the pump
  double kappa = 1.0;   // cavity linewidth
  double g = 0.0;       // matter-light coupling per atom
  int n_atoms = 1;

  double spin() const { return 0.5 * n_atoms; }
  double g_sqrt_n() const;

  // kappa > 0, n_atoms >= 1, g >= 0; throws std::invalid_argument.
  void validate() const;
};

// Q+- = g^2 / (kappa + i(omega +- omega0)) and the mean/difference
// combinations Q0 = (Q+ + Q-)/2, Q1 = (Q+ - Q-)/2. Real parts are written
// Q' and imaginary parts Q'' throughout the code.
struct RateSet {
  Complex q_plus{0.0, 0.0};
  Complex q_minus{0.0, 0.0};

  Complex q0() const { return 0.5 * (q_plus + q_minus); }
  Complex q1() const { return 0.5 * (q_plus - q_minus); }
};

RateSet compute_rates(const ModelParams& params);

// Rates entering the generator for a given mode: exact Q+- with Q1 zeroed
// (Q+- -> Q0) in the large-detuning variants.
RateSet rates_for_mode(const ModelParams& params, Mode mode);

// g_c sqrt(N) from 4 g_c^2 N = omega0 (omega^2 + kappa^2) / omega.
// Requires omega > 0 and omega0 > 0; kappa = 0 (closed cavity) is allowed.
double critical_coupling_sqrt_n(const ModelParams& params);

// Coefficient matrices of the compact master equation
//   drho/dt = -i[H_eff, rho] + sum_ij L_ij (2 C_j rho C_i^dag - {C_i^dag C_j, rho}),
//   H_eff   = omega0 S^z + sum_ij H_ij C_i^dag C_j,
// with C_1 = S^+, C_2 = S^-. Both matrices are Hermitian.
struct OperatorForm {
  Eigen::Matrix2cd h;
  Eigen::Matrix2cd l;
  double xi = 1.0;
};

OperatorForm operator_form(const RateSet& rates, double xi);

// Eigenvalues of the Kossakowski matrix L, sorted descending. For xi = 1
// they are Q0' +- sqrt((Q0')^2 + |Q1|^2).
std::array<double, 2> kossakowski_spectrum(const OperatorForm& form);

}  // namespace dicke
