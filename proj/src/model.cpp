#include "dicke/model.hpp"

#include <cmath>

namespace dicke {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Full: return "full";
    case Mode::Secular: return "secular";
    case Mode::LargeDetuning: return "large-detuning";
    case Mode::SecularLargeDetuning: return "secular-large-detuning";
  }
  return "?";
}

Mode mode_from_string(const std::string& name) {
  if (name == "full") return Mode::Full;
  if (name == "secular") return Mode::Secular;
  if (name == "large-detuning") return Mode::LargeDetuning;
  if (name == "secular-large-detuning") return Mode::SecularLargeDetuning;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected full, secular, large-detuning, "
                              "secular-large-detuning)");
}

double ModelParams::g_sqrt_n() const { return g * std::sqrt(double(n_atoms)); }

void ModelParams::validate() const {
  if (!(kappa > 0.0))
    throw std::invalid_argument("kappa must be > 0 (the bath correlator must decay)");
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  if (!(g >= 0.0)) throw std::invalid_argument("g must be >= 0");
  if (!std::isfinite(omega0) || !std::isfinite(omega) || !std::isfinite(kappa) ||
      !std::isfinite(g))
    throw std::invalid_argument("parameters must be finite");
}

RateSet compute_rates(const ModelParams& params) {
  params.validate();
  const double g2 = params.g * params.g;
  RateSet r;
  r.q_plus = g2 / Complex(params.kappa, params.omega + params.omega0);
  r.q_minus = g2 / Complex(params.kappa, params.omega - params.omega0);
  return r;
}

RateSet rates_for_mode(const ModelParams& params, Mode mode) {
  RateSet r = compute_rates(params);
  if (mode_zeroes_q1(mode)) {
    const Complex q0 = r.q0();
    r.q_plus = q0;
    r.q_minus = q0;
  }
  return r;
}

double critical_coupling_sqrt_n(const ModelParams& params) {
  if (!(params.omega > 0.0))
    throw std::invalid_argument("critical coupling requires omega > 0 (no transition otherwise)");
  if (!(params.omega0 > 0.0))
    throw std::invalid_argument("critical coupling requires omega0 > 0");
  const double w = params.omega, k = params.kappa;
  return std::sqrt(params.omega0 * (w * w + k * k) / (4.0 * w));
}

OperatorForm operator_form(const RateSet& rates, double xi) {
  const Complex q0 = rates.q0(), q1 = rates.q1();
  const double q0r = q0.real(), q0i = q0.imag();
  const double q1r = q1.real(), q1i = q1.imag();
  const Complex i(0.0, 1.0);

  OperatorForm form;
  form.xi = xi;
  form.h << Complex(q0i + q1i, 0.0), xi * (q0i + i * q1r),
      xi * (q0i - i * q1r), Complex(q0i - q1i, 0.0);
  // Off-diagonal L entries carry -i xi Q1'' in the (1,2) slot: this is the
  // assembly for which sum_ij L_ij (2 C_j rho C_i^dag - {C_i^dag C_j, rho})
  // with C_1 = S^+, C_2 = S^- reproduces the Redfield equation exactly
  // (the spectrum only depends on |L_12|, so the Kossakowski eigenvalues
  // are unaffected).
  form.l << Complex(q0r + q1r, 0.0), xi * (q0r - i * q1i),
      xi * (q0r + i * q1i), Complex(q0r - q1r, 0.0);
  return form;
}

std::array<double, 2> kossakowski_spectrum(const OperatorForm& form) {
  // Hermitian 2x2 [[a+d, b], [conj(b), a-d]] has eigenvalues
  // a +- sqrt(d^2 + |b|^2).
  const double a = 0.5 * (form.l(0, 0).real() + form.l(1, 1).real());
  const double d = 0.5 * (form.l(0, 0).real() - form.l(1, 1).real());
  const double s = std::sqrt(d * d + std::norm(form.l(0, 1)));
  return {a + s, a - s};
}

}  // namespace dicke
