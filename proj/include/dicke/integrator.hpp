// integrator.hpp: embedded Dormand-Prince 5(4) with dense output.
// Works on Eigen vectors with real or complex scalars.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dicke/errors.hpp"

namespace dicke {

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0: choose automatically
  double max_step = 0.0;      // 0: span of integration
  std::size_t max_steps = 50'000'000;
};

class step_underflow_error : public numerical_error {
 public:
  step_underflow_error(double t_reached, double step)
      : numerical_error("step size underflow at t = " + std::to_string(t_reached) +
                        " (h = " + std::to_string(step) + "); system too stiff"),
        t_reached(t_reached) {}
  double t_reached;
};

namespace detail {

template <class Vec>
double scaled_rms(const Vec& err, const Vec& y0, const Vec& y1, double atol,
                  double rtol) {
  const Eigen::Index n = err.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc =
        atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double e = std::abs(err(i)) / sc;
    acc += e * e;
  }
  return std::sqrt(acc / double(std::max<Eigen::Index>(n, 1)));
}

}  // namespace detail

// Integrate dy/dt = rhs(t, y) from t0 to t1 > t0. sample_times must be
// ascending and within [t0, t1]; on_sample(t, y) is called for each via the
// 4th-order dense-output interpolant. post_step(t, y) runs after every
// accepted step and may modify y in place (return true if it did).
template <class Vec, class Rhs, class SampleFn, class PostFn>
void integrate_dopri5(Rhs&& rhs, Vec& y, double t0, double t1,
                      const std::vector<double>& sample_times,
                      SampleFn&& on_sample, const IntegratorOptions& opts,
                      PostFn&& post_step) {
  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  // Dense-output coefficients (Hairer, Norsett, Wanner).
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: t1 must exceed t0");
  const double span = t1 - t0;
  const double max_step = opts.max_step > 0.0 ? opts.max_step : span;

  std::size_t next_sample = 0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    on_sample(sample_times[next_sample], y);
    ++next_sample;
  }

  Vec k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()),
      k6(y.size()), k7(y.size());
  Vec ynew(y.size()), err(y.size()), ytmp(y.size());

  double t = t0;
  rhs(t, y, k1);

  double h = opts.initial_step;
  if (h <= 0.0) {
    // Standard two-probe estimate of the initial step.
    const double d0 = detail::scaled_rms(y, y, y, opts.abs_tol, opts.rel_tol);
    const double d1n = detail::scaled_rms(k1, y, y, opts.abs_tol, opts.rel_tol);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span);
    ytmp = y + h0 * k1;
    rhs(t + h0, ytmp, k2);
    const double d2 =
        detail::scaled_rms(Vec(k2 - k1), y, y, opts.abs_tol, opts.rel_tol) / h0;
    const double dm = std::max(d1n, d2);
    double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                            : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, span});
  }
  h = std::min(h, max_step);

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opts.max_steps)
      throw numerical_error("integrate_dopri5: exceeded " +
                            std::to_string(opts.max_steps) + " steps at t = " +
                            std::to_string(t));
    if (!(h > 16.0 * std::numeric_limits<double>::epsilon() *
                  std::max(std::abs(t), 1.0)))
      throw step_underflow_error(t, h);
    const bool last = t + h >= t1;
    if (last) h = t1 - t;

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);  // FSAL

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double enorm =
        detail::scaled_rms(err, y, ynew, opts.abs_tol, opts.rel_tol);

    if (enorm <= 1.0) {
      // Dense output over [t, t+h] for any requested sample times.
      if (next_sample < sample_times.size() &&
          sample_times[next_sample] <= t + h) {
        Vec dy = ynew - y;
        Vec r3 = h * k1 - dy;
        Vec r4 = dy - h * k7 - r3;
        Vec r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] <= t + h + 1e-14 * std::abs(t + h)) {
          const double theta = (sample_times[next_sample] - t) / h;
          const double om = 1.0 - theta;
          ytmp = y + theta * (dy + om * (r3 + theta * (r4 + om * r5)));
          on_sample(sample_times[next_sample], ytmp);
          ++next_sample;
        }
      }
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      if (post_step(t, y)) rhs(t, y, k1);  // state was repaired; FSAL invalid
      const double grow =
          enorm == 0.0 ? 5.0
                       : std::min(5.0, std::max(0.2, 0.9 * std::pow(enorm, -0.2)));
      h = std::min(h * grow, max_step);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
    }
  }

  // Emit any trailing samples that coincide with t1 up to roundoff.
  while (next_sample < sample_times.size()) {
    on_sample(sample_times[next_sample], y);
    ++next_sample;
  }
}

template <class Vec, class Rhs, class SampleFn>
void integrate_dopri5(Rhs&& rhs, Vec& y, double t0, double t1,
                      const std::vector<double>& sample_times,
                      SampleFn&& on_sample,
                      const IntegratorOptions& opts = {}) {
  integrate_dopri5(std::forward<Rhs>(rhs), y, t0, t1, sample_times,
                   std::forward<SampleFn>(on_sample), opts,
                   [](double, Vec&) { return false; });
}

}  // namespace dicke
