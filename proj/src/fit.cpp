// fit.cpp: least-squares fit of A exp(l't) cos(l''t + phi) + c. The damped
// cosine on a uniform grid satisfies a three-term linear recurrence, which
// gives closed-form starting values; a short Gauss-Newton pass then refines
// all five parameters.

#include <cmath>

#include <Eigen/Dense>

#include "dicke/evolution.hpp"

namespace dicke {

namespace {

struct FitModel {
  double lam_re, lam_im, p, q, c;  // y = e^{l' t}(p cos l''t + q sin l''t) + c
};

double sse(const FitModel& m, const std::vector<double>& t,
           const std::vector<double>& y) {
  double acc = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    const double e = std::exp(m.lam_re * t[k]);
    const double r = e * (m.p * std::cos(m.lam_im * t[k]) +
                          m.q * std::sin(m.lam_im * t[k])) +
                     m.c - y[k];
    acc += r * r;
  }
  return acc;
}

}  // namespace

DampingFit fit_damping(const std::vector<double>& t, const std::vector<double>& y) {
  const size_t n = t.size();
  if (n != y.size()) throw std::invalid_argument("fit_damping: size mismatch");
  if (n < 16) throw std::invalid_argument("fit_damping: need at least 16 samples");
  const double h = t[1] - t[0];
  if (!(h > 0.0)) throw std::invalid_argument("fit_damping: grid must increase");
  for (size_t k = 1; k < n; ++k)
    if (std::abs((t[k] - t[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(t[k])))
      throw std::invalid_argument("fit_damping: grid must be uniform");

  double ymean = 0.0, yrms = 0.0;
  for (double v : y) ymean += v;
  ymean /= double(n);
  for (double v : y) yrms += (v - ymean) * (v - ymean);
  yrms = std::sqrt(yrms / double(n));
  if (yrms == 0.0)
    // Constant signal: zero rate, zero frequency, exact fit.
    return DampingFit{0.0, 0.0, 0.0};

  // Stage 1: y[k+2] = a y[k+1] + b y[k] + d  (least squares).
  Eigen::MatrixXd A(n - 2, 3);
  Eigen::VectorXd rhs(n - 2);
  for (size_t k = 0; k + 2 < n; ++k) {
    A(k, 0) = y[k + 1];
    A(k, 1) = y[k];
    A(k, 2) = 1.0;
    rhs(k) = y[k + 2];
  }
  const Eigen::Vector3d abd = A.colPivHouseholderQr().solve(rhs);
  const double a = abd(0), b = abd(1), d = abd(2);

  FitModel m{};
  const double denom = 1.0 - a - b;
  m.c = std::abs(denom) > 1e-9 ? d / denom : y.back();

  const double disc = a * a + 4.0 * b;
  if (disc < 0.0) {
    // Complex root pair z = exp((l' +- i l'') h).
    m.lam_re = 0.5 * std::log(-b) / h;
    m.lam_im = std::atan2(0.5 * std::sqrt(-disc), 0.5 * a) / h;
  } else {
    // Overdamped: take the slowest admissible real root.
    const double z1 = 0.5 * (a + std::sqrt(disc));
    const double z2 = 0.5 * (a - std::sqrt(disc));
    double z = 0.0;
    for (double cand : {z1, z2})
      if (cand > 0.0 && (z == 0.0 || std::abs(std::log(cand)) <
                                          std::abs(std::log(z))))
        z = cand;
    if (z <= 0.0)
      throw numerical_error("fit_damping: recurrence roots unusable (" +
                            std::to_string(z1) + ", " + std::to_string(z2) + ")");
    m.lam_re = std::log(z) / h;
    m.lam_im = 0.0;
  }

  // Stage 2: amplitudes are linear given (l', l'', c).
  auto solve_amplitudes = [&](FitModel& model) {
    const int cols = model.lam_im != 0.0 ? 2 : 1;
    Eigen::MatrixXd B(n, cols);
    Eigen::VectorXd r(n);
    for (size_t k = 0; k < n; ++k) {
      const double e = std::exp(model.lam_re * t[k]);
      B(k, 0) = e * std::cos(model.lam_im * t[k]);
      if (cols == 2) B(k, 1) = e * std::sin(model.lam_im * t[k]);
      r(k) = y[k] - model.c;
    }
    const Eigen::VectorXd pq = B.colPivHouseholderQr().solve(r);
    model.p = pq(0);
    model.q = cols == 2 ? pq(1) : 0.0;
  };
  solve_amplitudes(m);

  // Stage 3: Gauss-Newton polish of (l', l'', p, q, c).
  double best = sse(m, t, y);
  for (int iter = 0; iter < 40; ++iter) {
    Eigen::MatrixXd J(n, 5);
    Eigen::VectorXd r(n);
    for (size_t k = 0; k < n; ++k) {
      const double e = std::exp(m.lam_re * t[k]);
      const double cw = std::cos(m.lam_im * t[k]);
      const double sw = std::sin(m.lam_im * t[k]);
      const double osc = m.p * cw + m.q * sw;
      r(k) = e * osc + m.c - y[k];
      J(k, 0) = t[k] * e * osc;
      J(k, 1) = t[k] * e * (-m.p * sw + m.q * cw);
      J(k, 2) = e * cw;
      J(k, 3) = e * sw;
      J(k, 4) = 1.0;
    }
    Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    FitModel trial = m;
    double scale = 1.0;
    bool improved = false;
    for (int halve = 0; halve < 8; ++halve, scale *= 0.5) {
      trial.lam_re = m.lam_re + scale * step(0);
      trial.lam_im = m.lam_im + scale * step(1);
      trial.p = m.p + scale * step(2);
      trial.q = m.q + scale * step(3);
      trial.c = m.c + scale * step(4);
      const double s = sse(trial, t, y);
      if (s < best) {
        best = s;
        m = trial;
        improved = true;
        break;
      }
    }
    if (!improved || best < 1e-28 * double(n) * yrms * yrms) break;
  }

  DampingFit fit;
  fit.decay_rate = m.lam_re;
  fit.frequency = std::abs(m.lam_im);
  fit.residual = std::sqrt(best / double(n)) / yrms;

  if (fit.residual > 0.1)
    throw numerical_error("fit_damping: fit did not converge (relative residual " +
                          std::to_string(fit.residual) + ")");

  // Series-length precondition: >= 3 oscillation periods or >= 5 decay times.
  const double span = t.back() - t.front();
  const double periods = span * fit.frequency / (2.0 * M_PI);
  const double decays = span * std::abs(fit.decay_rate);
  if (periods < 3.0 && decays < 5.0)
    throw numerical_error(
        "fit_damping: series too short (" + std::to_string(periods) +
        " periods, " + std::to_string(decays) + " decay times; need >= 3 or >= 5)");
  return fit;
}

}  // namespace dicke
