#include "dicke/spin_space.hpp"

#include <algorithm>
#include <cmath>

namespace dicke {

LadderCoefficients::LadderCoefficients(int n_atoms) : n_(n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  table_.resize(n_);
  for (int m = 0; m < n_; ++m)
    table_[m] = std::sqrt(double(n_ - m) * double(m + 1));
}

Eigen::MatrixXcd sz_matrix(int n_atoms) {
  const double spin = 0.5 * n_atoms;
  Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(n_atoms + 1, n_atoms + 1);
  for (int m = 0; m <= n_atoms; ++m) sz(m, m) = double(m) - spin;
  return sz;
}

Eigen::MatrixXcd sp_matrix(int n_atoms) {
  const LadderCoefficients f(n_atoms);
  Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(n_atoms + 1, n_atoms + 1);
  for (int m = 0; m < n_atoms; ++m) sp(m + 1, m) = f(m);
  return sp;
}

Eigen::MatrixXcd sm_matrix(int n_atoms) { return sp_matrix(n_atoms).adjoint(); }

Eigen::MatrixXcd sx_matrix(int n_atoms) {
  return 0.5 * (sp_matrix(n_atoms) + sm_matrix(n_atoms));
}

Eigen::MatrixXcd sy_matrix(int n_atoms) {
  const Complex half_over_i(0.0, -0.5);
  return half_over_i * (sp_matrix(n_atoms) - sm_matrix(n_atoms));
}

Eigen::VectorXcd down_state(int n_atoms, double tilt_angle) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n_atoms + 1);
  psi(0) = 1.0;
  if (tilt_angle == 0.0) return psi;
  const Eigen::MatrixXcd sy = sy_matrix(n_atoms);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sy);
  Eigen::VectorXcd phases(n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k)
    phases(k) = std::exp(Complex(0.0, tilt_angle * es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint() * psi;
}

Eigen::VectorXcd coherent_plus_x(int n_atoms) {
  return down_state(n_atoms, M_PI / 2.0);
}

Observables spin_observables(const Eigen::MatrixXcd& rho) {
  const int dim = int(rho.rows());
  const int n = dim - 1;
  const double spin = 0.5 * n;
  const LadderCoefficients f(n);

  Observables obs;
  for (int m = 0; m < dim; ++m) {
    const double mval = double(m) - spin;
    const double p = rho(m, m).real();
    obs.sz += mval * p;
    obs.sz2 += mval * mval * p;
  }
  for (int m = 0; m < n; ++m) {
    obs.sx += f(m) * rho(m + 1, m).real();
    obs.sy -= f(m) * rho(m + 1, m).imag();
  }
  obs.purity = (rho * rho).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  obs.min_eig = es.eigenvalues().minCoeff();
  return obs;
}

PositivityReport positivity_report(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("positivity_report: matrix must be square");
  if (rho.rows() > 257)
    throw resource_error("positivity_report supports N <= 256");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  PositivityReport report;
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) < 0.0) report.negative.push_back(es.eigenvalues()(k));
  std::sort(report.negative.begin(), report.negative.end());
  return report;
}

double trace_error(const Eigen::MatrixXcd& rho) {
  return std::abs(rho.trace() - Complex(1.0, 0.0));
}

double hermiticity_drift(const Eigen::MatrixXcd& rho) {
  const double scale = rho.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace dicke
