// semiclassics.hpp: semiclassical equations of motion (full atom+cavity and
// the atom-only variants), closed-form fixed points, Brillouin steady state,
// and linear stability analysis.

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dicke/model.hpp"

namespace dicke {

struct SpinVector {
  double sx = 0.0, sy = 0.0, sz = 0.0;
  double length() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }
};

// Collective spin plus the complex cavity amplitude <a>.
struct FullState {
  SpinVector spin;
  Complex a{0.0, 0.0};
};

enum class FlowKind { Full, Secular, NaiveElimination };

// Which (Q0'', Q1') enter the atom-only collective flow: the exact values
// from compute_rates, or the paper's closed-form approximations valid for
// omega0 << omega, kappa.
enum class RateChoice { Exact, LargeDetuningApprox };

struct CollectiveRates {
  double q0_im = 0.0;  // Q0''
  double q1_re = 0.0;  // Q1'
};

CollectiveRates collective_rates(const ModelParams& params, RateChoice choice);
// Q0'' ~= -g^2 w / (w^2 + k^2), Q1' ~= -2 g^2 k w w0 / (w^2 + k^2)^2.
CollectiveRates rates_large_detuning_approx(const ModelParams& params);

// Full atom+cavity semiclassics (5 real degrees of freedom).
FullState flow_full_model(const FullState& state, const ModelParams& params);

// Thermodynamic-limit atom-only flow:
//   sx' = -w0 sy
//   sy' =  w0 sx - 8 Q0'' sz sx - 8 Q1' sz sy
//   sz' =  8 Q0'' sx sy + 8 Q1' sy^2
// Conserves the spin length exactly.
SpinVector flow_collective(const SpinVector& s, double omega0,
                           const CollectiveRates& rates);

// Secular atom-only flow: the overdamped <S-> equation plus
//   sz' = 2(Q+' - Q-')(S^2 - sz^2) [- 2(Q+' + Q-') sz when the 1/S-subleading
//   term is enabled; off by default in thermodynamic-limit mode].
SpinVector flow_secular(const SpinVector& s, const ModelParams& params,
                        bool include_subleading_sz = false);

SpinVector flow_atom_only(const SpinVector& s, const ModelParams& params,
                          FlowKind kind, RateChoice choice = RateChoice::Exact,
                          bool include_subleading_sz = false);

enum class FixedPointKind { Normal, Superradiant };
enum class StabilityClass { Stable, Unstable, Marginal };

const char* to_string(FixedPointKind kind);
const char* to_string(StabilityClass cls);

struct FixedPoint {
  SpinVector spin;
  FixedPointKind kind = FixedPointKind::Normal;
  StabilityClass stability = StabilityClass::Marginal;
};

// Fixed points of the collective flow: both polar states always, plus the
// symmetric superradiant pair above threshold. With the approximate rates
// (default) the superradiant points equal the closed forms
//   sx = +-(N/2) sqrt(1 - gc^4/g^4), sz = -(N/2) gc^2/g^2 exactly.
// Requires omega > 0 and omega0 > 0.
std::vector<FixedPoint> fixed_points(
    const ModelParams& params, RateChoice choice = RateChoice::LargeDetuningApprox);

// g sqrt(N) at which the superradiant pair appears (equals
// critical_coupling_sqrt_n for the approximate rates).
double superradiant_threshold_sqrt_n(const ModelParams& params, RateChoice choice);

struct StabilityReport {
  FixedPointKind kind = FixedPointKind::Normal;
  StabilityClass stability = StabilityClass::Marginal;
  std::array<Complex, 2> closed_form{};          // quoted 2x2-block eigenvalues
  std::array<Complex, 3> jacobian_eigenvalues{}; // includes the structural zero mode
  double max_rel_deviation = 0.0;                // closed form vs Jacobian
};

// Linear stability at a fixed point of the collective flow (verified to
// 1e-10; throws std::invalid_argument otherwise). Closed-form eigenvalues
// come from the quoted formulas; the numerical ones from the
// central-difference 3x3 Jacobian. Uses exact rates by default; pass the
// same choice that produced the fixed point.
StabilityReport stability(const ModelParams& params, const SpinVector& point,
                          RateChoice choice = RateChoice::Exact);

Eigen::Matrix3d analytic_jacobian(const SpinVector& s, double omega0,
                                  const CollectiveRates& rates);
// Central differences, step 1e-6 * max(N/2, 1) per coordinate; exact for
// this quadratic flow up to roundoff.
Eigen::Matrix3d numerical_jacobian(const SpinVector& s, double omega0,
                                   const CollectiveRates& rates, double scale);

// Brillouin function B_S(x); the removable singularity at x = 0 is handled
// by the series (S+1)x/(3S) for |x| < 1e-4.
double brillouin(double spin, double x);

struct ThermodynamicSign {
  int sign = 0;         // +1, -1, or 0 when undetermined
  bool crossover = false;  // |Q+'/Q-' - 1| <~ 1/S window
};

// Large-S secular steady state: <S^z>/S -> sign(ln(Q+'/Q-')), with the
// finite-S crossover window flagged.
ThermodynamicSign secular_sz_thermodynamic(const ModelParams& params);

// Semiclassical steady <S^z>/(N/2) of the stable attractor (the Fig.-2
// dashed curve): -1 below threshold, -gc^2/g^2 above.
double semiclassical_steady_sz_scaled(const ModelParams& params);

// Spin-length bookkeeping: true when |l - N/2| <= 1e-9 N/2. Trajectories
// with l != N/2 are permitted but callers should flag them.
bool on_spin_sphere(const SpinVector& s, int n_atoms);

}  // namespace dicke
