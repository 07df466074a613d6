// spin_space.hpp: Dicke-basis ladder coefficients, collective spin operators,
// reference states, and observable extraction.
//
// Index convention used everywhere: the magnetic quantum number
// M in {-S, ..., S} (S = N/2) is stored at slot m = M + S in {0, ..., N},
// so integer arithmetic stays exact for odd N.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dicke/model.hpp"

namespace dicke {

// f[m] = f_+^M = sqrt((S - M)(S + M + 1)) = sqrt((N - m)(m + 1)).
// Out-of-range slots evaluate to exactly 0, which encodes the boundary
// annihilation f^S = 0, f^{-S-1} = 0 and the identity f_-^M = f_+^{M-1}.
class LadderCoefficients {
 public:
  explicit LadderCoefficients(int n_atoms);

  int n_atoms() const { return n_; }
  double operator()(int m) const {
    return (m < 0 || m >= n_) ? 0.0 : table_[m];
  }

 private:
  int n_;
  std::vector<double> table_;
};

// Dense collective spin operators in the Dicke basis, (N+1) x (N+1).
Eigen::MatrixXcd sz_matrix(int n_atoms);
Eigen::MatrixXcd sp_matrix(int n_atoms);  // S^+
Eigen::MatrixXcd sm_matrix(int n_atoms);  // S^-
Eigen::MatrixXcd sx_matrix(int n_atoms);
Eigen::MatrixXcd sy_matrix(int n_atoms);

// |S, -S> (all spins down), optionally rotated by exp(+i theta S^y) so that
// a small positive tilt seeds a positive <S^x> ~ S sin(theta).
Eigen::VectorXcd down_state(int n_atoms, double tilt_angle = 0.0);

// Spin coherent state along +x; <S^x> = S exactly.
Eigen::VectorXcd coherent_plus_x(int n_atoms);

struct Observables {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
  double sz2 = 0.0;      // <(S^z)^2>
  double purity = 0.0;   // tr(rho^2)
  double min_eig = 0.0;  // smallest eigenvalue of rho
};

// <S^z> = sum_M M rho_MM, <S^x> = sum_M f[M] Re rho_{M+1,M},
// <S^y> = -sum_M f[M] Im rho_{M+1,M}; includes a full Hermitian
// eigendecomposition for the smallest eigenvalue.
Observables spin_observables(const Eigen::MatrixXcd& rho);

struct PositivityReport {
  double min_eigenvalue = 0.0;
  std::vector<double> negative;  // all eigenvalues below zero, ascending
};

// Full Hermitian eigendecomposition diagnostics. Supported up to N = 256.
PositivityReport positivity_report(const Eigen::MatrixXcd& rho);

double trace_error(const Eigen::MatrixXcd& rho);   // |tr rho - 1|
double hermiticity_drift(const Eigen::MatrixXcd& rho);  // max|rho - rho^dag| / max|rho|

}  // namespace dicke
