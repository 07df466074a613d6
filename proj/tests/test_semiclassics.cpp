// Tests for the semiclassical flows, fixed points, stability analysis,
// Brillouin function, and the thermodynamic-limit pole selection.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dicke/evolution.hpp"
#include "dicke/integrator.hpp"
#include "dicke/semiclassics.hpp"

using namespace dicke;

namespace {

std::mt19937 rng(311);

ModelParams reference_params(int n_atoms, double g_sqrt_n) {
  ModelParams p;
  p.omega0 = 0.1;
  p.omega = 1.0;
  p.kappa = 1.0;
  p.g = g_sqrt_n / std::sqrt(double(n_atoms));
  p.n_atoms = n_atoms;
  return p;
}

// Integrate the collective flow with the shared adaptive integrator.
SpinVector integrate_collective(SpinVector s, double omega0,
                                const CollectiveRates& rates, double t_final,
                                double rel_tol = 1e-10) {
  Eigen::VectorXd y(3);
  y << s.sx, s.sy, s.sz;
  auto rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& d) {
    const SpinVector ds = flow_collective({v(0), v(1), v(2)}, omega0, rates);
    d << ds.sx, ds.sy, ds.sz;
  };
  IntegratorOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-14;
  integrate_dopri5(rhs, y, 0.0, t_final, {}, [](double, const Eigen::VectorXd&) {},
                   opts);
  return {y(0), y(1), y(2)};
}

}  // namespace

TEST_CASE("full-model flow: structure") {
  const ModelParams p = reference_params(10, 0.3);
  SUBCASE("g = 0, a = 0: pure precession at omega0") {
    ModelParams p0 = p;
    p0.g = 0.0;
    const FullState s{{1.0, 2.0, -3.0}, {0.0, 0.0}};
    const FullState d = flow_full_model(s, p0);
    CHECK(d.spin.sx == doctest::Approx(-p.omega0 * 2.0).epsilon(1e-15));
    CHECK(d.spin.sy == doctest::Approx(p.omega0 * 1.0).epsilon(1e-15));
    CHECK(d.spin.sz == 0.0);
    CHECK(d.a == Complex(0.0, 0.0));
  }
  SUBCASE("adiabatic amplitude zeroes the cavity flow") {
    const SpinVector s{2.0, 0.5, -4.0};
    const Complex a_ad =
        -Complex(0.0, 2.0 * p.g) * s.sx / Complex(p.kappa, p.omega);
    const FullState d = flow_full_model({s, a_ad}, p);
    CHECK(std::abs(d.a) < 1e-15);
  }
  SUBCASE("normal state is a fixed point for all g") {
    for (double gn : {0.1, 0.3, 0.6}) {
      const ModelParams q = reference_params(10, gn);
      const FullState s{{0.0, 0.0, -5.0}, {0.0, 0.0}};
      const FullState d = flow_full_model(s, q);
      CHECK(d.spin.sx == 0.0);
      CHECK(d.spin.sy == 0.0);
      CHECK(d.spin.sz == 0.0);
      CHECK(std::abs(d.a) == 0.0);
    }
  }
}

TEST_CASE("collective flow: fixed-point manifold and spin-length conservation") {
  const ModelParams p = reference_params(20, 0.3);
  const CollectiveRates r = collective_rates(p, RateChoice::Exact);
  SUBCASE("sy = 0 freezes sx and sz") {
    const SpinVector d = flow_collective({3.0, 0.0, -7.0}, p.omega0, r);
    CHECK(d.sz == 0.0);
    CHECK(d.sx == 0.0);
  }
  SUBCASE("analytic conservation of the spin length") {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const SpinVector s{10.0 * u(rng), 10.0 * u(rng), 10.0 * u(rng)};
      const SpinVector d = flow_collective(s, p.omega0, r);
      CHECK(std::abs(s.sx * d.sx + s.sy * d.sy + s.sz * d.sz) < 1e-12);
    }
  }
  SUBCASE("numerical conservation along a trajectory to t = 100") {
    const SpinVector s0{3.0, -1.0, -9.0};
    const double l0 = s0.length();
    const SpinVector s1 = integrate_collective(s0, p.omega0, r, 100.0, 1e-10);
    CHECK(std::abs(s1.length() - l0) < 1e-9 * l0);
  }
}

TEST_CASE("secular flow: overdamped coherences vanish in steady state") {
  const ModelParams p = reference_params(12, 0.4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd y(3);
    y << 4.0 * u(rng), 4.0 * u(rng), 4.0 * u(rng);
    auto rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& d) {
      const SpinVector ds = flow_secular({v(0), v(1), v(2)}, p, false);
      d << ds.sx, ds.sy, ds.sz;
    };
    IntegratorOptions opts;
    opts.rel_tol = 1e-10;
    integrate_dopri5(rhs, y, 0.0, 4000.0, {},
                     [](double, const Eigen::VectorXd&) {}, opts);
    CHECK(std::abs(y(0)) < 1e-6);  // <S-> -> 0 regardless of the start
    CHECK(std::abs(y(1)) < 1e-6);
    // sz runs to a pole: Q+' < Q-' here, so toward -S.
    CHECK(y(2) == doctest::Approx(-p.spin()).epsilon(1e-6));
  }
}

TEST_CASE("large-detuning rate approximations") {
  SUBCASE("omega0 = 0 kills Q1'") {
    ModelParams p = reference_params(4, 0.3);
    p.omega0 = 0.0;
    CHECK(rates_large_detuning_approx(p).q1_re == 0.0);
  }
  SUBCASE("quoted values at g = 0.2, w = k = 1, w0 = 0.1") {
    ModelParams p{0.1, 1.0, 1.0, 0.2, 4};
    const CollectiveRates r = rates_large_detuning_approx(p);
    CHECK(r.q0_im == doctest::Approx(-0.02).epsilon(1e-14));
    CHECK(r.q1_re == doctest::Approx(-0.002).epsilon(1e-14));
  }
  SUBCASE("error against the exact rates is O(omega0^2)") {
    double prev_ratio = 0.0;
    for (double w0 : {0.2, 0.1, 0.05, 0.025}) {
      ModelParams p{w0, 1.0, 1.0, 0.2, 4};
      const CollectiveRates ex = collective_rates(p, RateChoice::Exact);
      const CollectiveRates ap = rates_large_detuning_approx(p);
      const double err = std::abs(ex.q0_im - ap.q0_im) + std::abs(ex.q1_re - ap.q1_re);
      const double ratio = err / (w0 * w0);
      if (prev_ratio > 0.0)
        CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.5));
      prev_ratio = ratio;
    }
  }
}

TEST_CASE("fixed points") {
  SUBCASE("below threshold: only the polar pair") {
    const ModelParams p = reference_params(30, 0.5 * std::sqrt(0.05));
    const auto points = fixed_points(p);
    REQUIRE(points.size() == 2);
    CHECK(points[0].kind == FixedPointKind::Normal);
    CHECK(points[0].spin.sz == doctest::Approx(-15.0));
    CHECK(points[0].stability == StabilityClass::Stable);
    CHECK(points[1].spin.sz == doctest::Approx(15.0));
    CHECK(points[1].stability == StabilityClass::Unstable);
  }
  SUBCASE("at g = sqrt(2) gc: the quoted closed form, exactly") {
    const int n = 30;
    const ModelParams base = reference_params(n, 0.1);
    const double gcn = critical_coupling_sqrt_n(base);
    ModelParams p = base;
    p.g = std::sqrt(2.0) * gcn / std::sqrt(double(n));
    const auto points = fixed_points(p);
    REQUIRE(points.size() == 4);
    int superradiant = 0;
    for (const auto& fp : points) {
      if (fp.kind != FixedPointKind::Superradiant) {
        CHECK(fp.stability == StabilityClass::Unstable);
        continue;
      }
      ++superradiant;
      CHECK(fp.spin.sz / p.spin() == doctest::Approx(-0.5).epsilon(1e-12));
      CHECK(std::abs(fp.spin.sx) / p.spin() ==
            doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
      CHECK(fp.spin.sy == 0.0);
      CHECK(fp.stability == StabilityClass::Stable);
    }
    CHECK(superradiant == 2);
  }
  SUBCASE("at threshold the pair merges with the normal state") {
    const int n = 30;
    const ModelParams base = reference_params(n, 0.1);
    ModelParams p = base;
    p.g = critical_coupling_sqrt_n(base) / std::sqrt(double(n));
    const auto points = fixed_points(p);
    CHECK(points.size() == 2);  // sx = 0: merged
    CHECK(points[0].stability == StabilityClass::Marginal);
  }
  SUBCASE("omega <= 0 is rejected") {
    ModelParams p = reference_params(10, 0.3);
    p.omega = -1.0;
    CHECK_THROWS_AS(fixed_points(p), std::invalid_argument);
  }
  SUBCASE("fixed-point residual") {
    for (double gn : {0.15, 0.3, 0.5}) {
      const ModelParams p = reference_params(24, gn);
      for (RateChoice choice :
           {RateChoice::LargeDetuningApprox, RateChoice::Exact}) {
        const CollectiveRates r = collective_rates(p, choice);
        for (const auto& fp : fixed_points(p, choice)) {
          const SpinVector d = flow_collective(fp.spin, p.omega0, r);
          const double norm =
              std::sqrt(d.sx * d.sx + d.sy * d.sy + d.sz * d.sz);
          CHECK(norm < 1e-12 * p.n_atoms);
        }
      }
    }
  }
}

TEST_CASE("stability analysis") {
  SUBCASE("g = 0: pure precession eigenvalues +-i omega0 and a zero mode") {
    const ModelParams p = reference_params(20, 0.0);
    const StabilityReport rep = stability(p, {0.0, 0.0, -10.0});
    CHECK(rep.closed_form[0] == Complex(0.0, p.omega0));
    CHECK(rep.closed_form[1] == Complex(0.0, -p.omega0));
    CHECK(rep.stability == StabilityClass::Marginal);
    int zero_modes = 0;
    for (const auto& mu : rep.jacobian_eigenvalues)
      if (std::abs(mu) < 1e-12) ++zero_modes;
    CHECK(zero_modes == 1);
  }
  SUBCASE("slightly above threshold the normal state destabilizes") {
    const int n = 40;
    const ModelParams base = reference_params(n, 0.1);
    const double gcn = critical_coupling_sqrt_n(base);
    ModelParams p = base;
    p.g = 1.02 * gcn / std::sqrt(double(n));
    const StabilityReport rep =
        stability(p, {0.0, 0.0, -p.spin()}, RateChoice::LargeDetuningApprox);
    CHECK(rep.stability == StabilityClass::Unstable);
    const double re_max =
        std::max(rep.closed_form[0].real(), rep.closed_form[1].real());
    CHECK(re_max > 0.0);
  }
  SUBCASE("superradiant ring-down at g = 1.5 gc, exact rates") {
    const int n = 50;
    const ModelParams base = reference_params(n, 0.1);
    const double gcn = critical_coupling_sqrt_n(base);
    ModelParams p = base;
    p.g = 1.5 * gcn / std::sqrt(double(n));
    const auto points = fixed_points(p, RateChoice::Exact);
    REQUIRE(points.size() == 4);
    for (const auto& fp : points) {
      if (fp.kind != FixedPointKind::Superradiant) continue;
      const StabilityReport rep = stability(p, fp.spin, RateChoice::Exact);
      const double expect = -p.kappa * p.omega0 * p.omega0 /
                            (p.omega * p.omega + p.kappa * p.kappa);
      CHECK(rep.closed_form[0].real() ==
            doctest::Approx(expect).epsilon(0.10));
      CHECK(rep.max_rel_deviation < 1e-6);
      CHECK(rep.kind == FixedPointKind::Superradiant);
      CHECK(rep.stability == StabilityClass::Stable);
    }
  }
  SUBCASE("closed form vs numerical Jacobian below threshold") {
    const ModelParams p = reference_params(16, 0.15);
    const StabilityReport rep = stability(p, {0.0, 0.0, -8.0});
    CHECK(rep.max_rel_deviation < 1e-6);
  }
  SUBCASE("non-fixed-point input is rejected") {
    const ModelParams p = reference_params(16, 0.15);
    CHECK_THROWS_AS(stability(p, {1.0, 1.0, -7.0}), std::invalid_argument);
  }
  SUBCASE("threshold from eigenvalue bisection equals the closed form") {
    const int n = 32;
    const ModelParams base = reference_params(n, 0.1);
    auto leading_re = [&](double g_sqrt_n) {
      ModelParams p = base;
      p.g = g_sqrt_n / std::sqrt(double(n));
      const auto rep =
          stability(p, {0.0, 0.0, -p.spin()}, RateChoice::LargeDetuningApprox);
      return std::max(rep.closed_form[0].real(), rep.closed_form[1].real());
    };
    double lo = 0.1, hi = 0.4;
    REQUIRE(leading_re(lo) < 0.0);
    REQUIRE(leading_re(hi) > 0.0);
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (leading_re(mid) > 0.0 ? hi : lo) = mid;
    }
    CHECK(std::abs(0.5 * (lo + hi) - critical_coupling_sqrt_n(base)) < 1e-9);
  }
}

TEST_CASE("superradiant ring-down of the collective flow at g = 1.2 gc") {
  // A trajectory relaxing into the superradiant point rings down at the
  // closed-form pair; the fit of sz(t) - sz_ss reproduces it, and the decay
  // approaches -kappa w0^2 / (w^2 + kappa^2).
  const int n = 40;
  const ModelParams base = reference_params(n, 0.1);
  const double gcn = critical_coupling_sqrt_n(base);
  ModelParams p = base;
  p.g = 1.2 * gcn / std::sqrt(double(n));

  const auto points = fixed_points(p, RateChoice::Exact);
  const CollectiveRates r = collective_rates(p, RateChoice::Exact);
  REQUIRE(points.size() == 4);
  for (const auto& fp : points) {
    if (fp.kind != FixedPointKind::Superradiant || fp.spin.sx < 0.0) continue;
    SpinVector s0 = fp.spin;
    s0.sy += 0.05 * p.spin();  // small kick off the attractor
    s0.sx = std::sqrt(std::max(p.spin() * p.spin() - s0.sy * s0.sy -
                                   s0.sz * s0.sz,
                               0.0));

    std::vector<double> t, z;
    Eigen::VectorXd y(3);
    y << s0.sx, s0.sy, s0.sz;
    auto rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& d) {
      const SpinVector ds = flow_collective({v(0), v(1), v(2)}, p.omega0, r);
      d << ds.sx, ds.sy, ds.sz;
    };
    std::vector<double> grid;
    for (int k = 0; k < 1000; ++k) grid.push_back(600.0 * k / 999.0);
    IntegratorOptions opts;
    opts.rel_tol = 1e-11;
    integrate_dopri5(rhs, y, 0.0, 600.0, grid,
                     [&](double tk, const Eigen::VectorXd& v) {
                       t.push_back(tk);
                       z.push_back(v(2) - fp.spin.sz);
                     },
                     opts);
    const DampingFit fit = fit_damping(t, z);

    const StabilityReport rep = stability(p, fp.spin, RateChoice::Exact);
    CHECK(fit.decay_rate ==
          doctest::Approx(rep.closed_form[0].real()).epsilon(1e-3));
    CHECK(fit.frequency ==
          doctest::Approx(std::abs(rep.closed_form[0].imag())).epsilon(1e-3));
    const double rate_approx =
        -p.kappa * p.omega0 * p.omega0 / (p.omega * p.omega + p.kappa * p.kappa);
    CHECK(fit.decay_rate == doctest::Approx(rate_approx).epsilon(0.10));
  }
}

TEST_CASE("central-difference Jacobian reproduces the analytic one") {
  const ModelParams p = reference_params(24, 0.35);
  const CollectiveRates r = collective_rates(p, RateChoice::Exact);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const SpinVector s{12.0 * u(rng), 12.0 * u(rng), 12.0 * u(rng)};
    const Eigen::Matrix3d a = analytic_jacobian(s, p.omega0, r);
    const Eigen::Matrix3d njac = numerical_jacobian(s, p.omega0, r, p.spin());
    const double scale = a.cwiseAbs().maxCoeff();
    CHECK((a - njac).cwiseAbs().maxCoeff() < 1e-6 * std::max(scale, 1e-12));
  }
}

TEST_CASE("naive elimination equals the collective flow with Q1' = 0") {
  const ModelParams p = reference_params(18, 0.4);
  CollectiveRates r = rates_large_detuning_approx(p);
  r.q1_re = 0.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SpinVector s{9.0 * u(rng), 9.0 * u(rng), 9.0 * u(rng)};
    const SpinVector a = flow_atom_only(s, p, FlowKind::NaiveElimination);
    const SpinVector b = flow_collective(s, p.omega0, r);
    CHECK(a.sx == b.sx);
    CHECK(a.sy == b.sy);
    CHECK(a.sz == b.sz);
  }
}

TEST_CASE("brillouin function") {
  CHECK(brillouin(3.5, 0.0) == 0.0);
  CHECK(brillouin(2.0, 200.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(brillouin(2.0, -200.0) == doctest::Approx(-1.0).epsilon(1e-12));
  for (double x : {0.1, 1.0, 3.0})
    CHECK(brillouin(0.5, x) == doctest::Approx(std::tanh(x)).epsilon(1e-12));
  // The coth form just outside the series window matches the series slope.
  const double x = 1.2e-4;
  const double series = (1.5 + 1.0) * x / (3.0 * 1.5);
  CHECK(brillouin(1.5, x) == doctest::Approx(series).epsilon(1e-7));
  CHECK_THROWS_AS(brillouin(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("secular pole selection in the thermodynamic limit") {
  SUBCASE("omega > 0, omega0 > 0 selects -S") {
    const ModelParams p = reference_params(1000, 0.5);
    const ThermodynamicSign s = secular_sz_thermodynamic(p);
    CHECK(s.sign == -1);
    CHECK_FALSE(s.crossover);
  }
  SUBCASE("omega0 = 0: undetermined, crossover flagged") {
    ModelParams p = reference_params(1000, 0.5);
    p.omega0 = 0.0;
    const ThermodynamicSign s = secular_sz_thermodynamic(p);
    CHECK(s.sign == 0);
    CHECK(s.crossover);
  }
  SUBCASE("omega < 0 with |omega| > omega0 selects +S") {
    ModelParams p = reference_params(1000, 0.5);
    p.omega = -1.0;
    CHECK(secular_sz_thermodynamic(p).sign == 1);
  }
  SUBCASE("selection never depends on the magnitude of g") {
    ModelParams p = reference_params(500, 0.3);
    const int base_sign = secular_sz_thermodynamic(p).sign;
    for (double scale : {1e-3, 0.1, 10.0, 1e3}) {
      ModelParams q = p;
      q.g = p.g * scale;
      CHECK(secular_sz_thermodynamic(q).sign == base_sign);
    }
  }
}

TEST_CASE("semiclassical steady sz: Fig.-2 dashed curve") {
  const ModelParams base = reference_params(32, 0.1);
  const double gcn = critical_coupling_sqrt_n(base);
  ModelParams p = base;
  p.g = 0.5 * gcn / std::sqrt(32.0);
  CHECK(semiclassical_steady_sz_scaled(p) == -1.0);
  p.g = std::sqrt(2.0) * gcn / std::sqrt(32.0);
  CHECK(semiclassical_steady_sz_scaled(p) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("spin-length bookkeeping flags off-sphere states") {
  CHECK(on_spin_sphere({0.0, 0.0, -5.0}, 10));
  CHECK_FALSE(on_spin_sphere({0.0, 0.0, -4.0}, 10));
}
