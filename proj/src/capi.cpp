// capi.cpp: extern-C facade over the core library. Exceptions are caught at
// the boundary and mapped to status codes; the message is kept thread-local.

#include "dicke.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "dicke/cavity.hpp"
#include "dicke/evolution.hpp"
#include "dicke/liouvillian.hpp"
#include "dicke/model.hpp"
#include "dicke/semiclassics.hpp"

namespace {

thread_local std::string g_last_error;

dicke::ModelParams to_params(const dk_params* p) {
  if (p == nullptr) throw std::invalid_argument("params must not be null");
  dicke::ModelParams params;
  params.omega0 = p->omega0;
  params.omega = p->omega;
  params.kappa = p->kappa;
  params.g = p->g;
  params.n_atoms = p->n_atoms;
  return params;
}

dicke::Mode to_mode(dk_mode mode) {
  switch (mode) {
    case DK_MODE_FULL: return dicke::Mode::Full;
    case DK_MODE_SECULAR: return dicke::Mode::Secular;
    case DK_MODE_LARGE_DETUNING: return dicke::Mode::LargeDetuning;
    case DK_MODE_SECULAR_LARGE_DETUNING: return dicke::Mode::SecularLargeDetuning;
  }
  throw std::invalid_argument("invalid dk_mode value");
}

template <class Fn>
dk_status guarded(Fn&& fn) {
  try {
    fn();
    return DK_OK;
  } catch (const dicke::unsupported_error& e) {
    g_last_error = e.what();
    return DK_ERR_UNSUPPORTED;
  } catch (const dicke::resource_error& e) {
    g_last_error = e.what();
    return DK_ERR_RESOURCE_LIMIT;
  } catch (const dicke::numerical_error& e) {
    g_last_error = e.what();
    return DK_ERR_NUMERICAL;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return DK_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DK_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DK_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

struct dk_evolution {
  dicke::EvolutionResult result;
};

extern "C" {

const char* dk_version(void) { return "0.1.0"; }

const char* dk_status_name(dk_status status) {
  switch (status) {
    case DK_OK: return "ok";
    case DK_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DK_ERR_NUMERICAL: return "numerical failure";
    case DK_ERR_RESOURCE_LIMIT: return "resource limit";
    case DK_ERR_UNSUPPORTED: return "unsupported";
    case DK_ERR_INTERNAL: return "internal error";
  }
  return "?";
}

const char* dk_error_message(void) { return g_last_error.c_str(); }

dk_status dk_compute_rates(const dk_params* params, dk_rates* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const dicke::RateSet r = dicke::compute_rates(to_params(params));
    out->q_plus_re = r.q_plus.real();
    out->q_plus_im = r.q_plus.imag();
    out->q_minus_re = r.q_minus.real();
    out->q_minus_im = r.q_minus.imag();
    out->q0_re = r.q0().real();
    out->q0_im = r.q0().imag();
    out->q1_re = r.q1().real();
    out->q1_im = r.q1().imag();
  });
}

dk_status dk_critical_coupling(const dk_params* params, double* gc_sqrt_n) {
  return guarded([&] {
    require(gc_sqrt_n != nullptr, "out must not be null");
    *gc_sqrt_n = dicke::critical_coupling_sqrt_n(to_params(params));
  });
}

dk_status dk_kossakowski_spectrum(const dk_params* params, int xi,
                                  double eigenvalues[2]) {
  return guarded([&] {
    require(eigenvalues != nullptr, "out must not be null");
    require(xi == 0 || xi == 1, "xi must be 0 or 1");
    const dicke::RateSet r = dicke::compute_rates(to_params(params));
    const auto spectrum = dicke::kossakowski_spectrum(dicke::operator_form(r, xi));
    eigenvalues[0] = spectrum[0];
    eigenvalues[1] = spectrum[1];
  });
}

dk_status dk_steady_state(const dk_params* params, dk_mode mode,
                          dk_steady_result* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const auto spec = dicke::GeneratorSpec::make(to_params(params), to_mode(mode));
    const dicke::SteadyStateResult res = dicke::steady_state(spec);
    out->sx = res.obs.sx;
    out->sy = res.obs.sy;
    out->sz = res.obs.sz;
    out->sz2 = res.obs.sz2;
    out->purity = res.obs.purity;
    out->min_eig = res.obs.min_eig;
    out->residual = res.residual;
    out->generator_norm = res.generator_norm;
    out->degenerate = res.degenerate ? 1 : 0;
  });
}

dk_status dk_semiclassical_steady_sz(const dk_params* params, double* sz_scaled) {
  return guarded([&] {
    require(sz_scaled != nullptr, "out must not be null");
    *sz_scaled = dicke::semiclassical_steady_sz_scaled(to_params(params));
  });
}

dk_status dk_brillouin(double spin, double x, double* value) {
  return guarded([&] {
    require(value != nullptr, "out must not be null");
    *value = dicke::brillouin(spin, x);
  });
}

dk_status dk_secular_sz_sign(const dk_params* params, int* sign, int* crossover) {
  return guarded([&] {
    require(sign != nullptr && crossover != nullptr, "out must not be null");
    const dicke::ThermodynamicSign s =
        dicke::secular_sz_thermodynamic(to_params(params));
    *sign = s.sign;
    *crossover = s.crossover ? 1 : 0;
  });
}

dk_status dk_generator_dump(const dk_params* params, dk_mode mode,
                            const char* path) {
  return guarded([&] {
    require(path != nullptr, "path must not be null");
    const auto spec = dicke::GeneratorSpec::make(to_params(params), to_mode(mode));
    dicke::dump_generator(dicke::vectorized_generator(spec), path);
  });
}

void dk_evolve_opts_init(dk_evolve_opts* opts) {
  if (opts == nullptr) return;
  opts->t_final = 100.0;
  opts->n_samples = 201;
  opts->rel_tol = 1e-9;
  opts->abs_tol = 1e-12;
  opts->tilt = 1e-3;
}

dk_status dk_evolve(const dk_params* params, dk_mode mode,
                    const dk_evolve_opts* opts, dk_evolution** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    dk_evolve_opts defaults;
    dk_evolve_opts_init(&defaults);
    const dk_evolve_opts* o = opts != nullptr ? opts : &defaults;

    const dicke::ModelParams p = to_params(params);
    const auto spec = dicke::GeneratorSpec::make(p, to_mode(mode));
    dicke::EvolveOptions eopts;
    eopts.t_final = o->t_final;
    eopts.n_samples = o->n_samples;
    eopts.rel_tol = o->rel_tol;
    eopts.abs_tol = o->abs_tol;
    auto rho0 = dicke::DickeDensityMatrix::ground(p.n_atoms, o->tilt);
    auto* handle = new dk_evolution{dicke::evolve(spec, rho0, eopts)};
    *out = handle;
  });
}

void dk_evolution_free(dk_evolution* evolution) { delete evolution; }

size_t dk_evolution_length(const dk_evolution* evolution) {
  return evolution == nullptr ? 0 : evolution->result.t.size();
}

dk_status dk_evolution_series(const dk_evolution* evolution, dk_series series,
                              double* buffer, size_t length) {
  return guarded([&] {
    require(evolution != nullptr, "evolution must not be null");
    require(buffer != nullptr, "buffer must not be null");
    const dicke::EvolutionResult& r = evolution->result;
    const std::vector<double>* src = nullptr;
    switch (series) {
      case DK_SERIES_TIME: src = &r.t; break;
      case DK_SERIES_SX: src = &r.sx; break;
      case DK_SERIES_SY: src = &r.sy; break;
      case DK_SERIES_SZ: src = &r.sz; break;
      case DK_SERIES_SZ2: src = &r.sz2; break;
      case DK_SERIES_PURITY: src = &r.purity; break;
      case DK_SERIES_MIN_EIG: src = &r.min_eig; break;
      case DK_SERIES_TRACE_ERR: src = &r.trace_err; break;
    }
    require(src != nullptr, "invalid dk_series value");
    require(length >= src->size(), "buffer too small");
    std::memcpy(buffer, src->data(), src->size() * sizeof(double));
  });
}

int dk_evolution_trace_flagged(const dk_evolution* evolution) {
  return (evolution != nullptr && evolution->result.trace_flagged) ? 1 : 0;
}

dk_status dk_fit_damping(const dk_evolution* evolution, dk_series observable,
                         dk_damping_fit* out) {
  return guarded([&] {
    require(evolution != nullptr, "evolution must not be null");
    require(out != nullptr, "out must not be null");
    const char* name = nullptr;
    switch (observable) {
      case DK_SERIES_SX: name = "sx"; break;
      case DK_SERIES_SY: name = "sy"; break;
      case DK_SERIES_SZ: name = "sz"; break;
      default: break;
    }
    require(name != nullptr, "observable must be sx, sy, or sz");
    const dicke::DampingFit fit = dicke::fit_damping(evolution->result, name);
    out->decay_rate = fit.decay_rate;
    out->frequency = fit.frequency;
    out->residual = fit.residual;
  });
}

dk_status dk_fixed_points(const dk_params* params, int use_exact_rates,
                          dk_fixed_point* buffer, size_t capacity,
                          size_t* count) {
  return guarded([&] {
    require(count != nullptr, "count must not be null");
    const auto choice = use_exact_rates ? dicke::RateChoice::Exact
                                        : dicke::RateChoice::LargeDetuningApprox;
    const auto points = dicke::fixed_points(to_params(params), choice);
    *count = points.size();
    if (buffer == nullptr) return;
    const size_t n = std::min(capacity, points.size());
    for (size_t k = 0; k < n; ++k) {
      buffer[k].sx = points[k].spin.sx;
      buffer[k].sy = points[k].spin.sy;
      buffer[k].sz = points[k].spin.sz;
      buffer[k].kind = int(points[k].kind);
      buffer[k].stability = int(points[k].stability);
    }
  });
}

dk_status dk_stability(const dk_params* params, const dk_fixed_point* point,
                       int use_exact_rates, dk_stability_report* out) {
  return guarded([&] {
    require(point != nullptr, "point must not be null");
    require(out != nullptr, "out must not be null");
    const auto choice = use_exact_rates ? dicke::RateChoice::Exact
                                        : dicke::RateChoice::LargeDetuningApprox;
    const dicke::SpinVector s{point->sx, point->sy, point->sz};
    const dicke::StabilityReport rep =
        dicke::stability(to_params(params), s, choice);
    for (int k = 0; k < 2; ++k) {
      out->closed_re[k] = rep.closed_form[k].real();
      out->closed_im[k] = rep.closed_form[k].imag();
    }
    for (int k = 0; k < 3; ++k) {
      out->jac_re[k] = rep.jacobian_eigenvalues[k].real();
      out->jac_im[k] = rep.jacobian_eigenvalues[k].imag();
    }
    out->max_rel_deviation = rep.max_rel_deviation;
    out->kind = int(rep.kind);
    out->stability = int(rep.stability);
  });
}

void dk_oracle_opts_init(dk_oracle_opts* opts) {
  if (opts == nullptr) return;
  opts->n_max_initial = 0;
  opts->n_max_cap = 256;
  opts->shift_tol = 1e-8;
}

dk_status dk_oracle_steady_state(const dk_params* params,
                                 const dk_oracle_opts* opts,
                                 dk_oracle_steady* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    dk_oracle_opts defaults;
    dk_oracle_opts_init(&defaults);
    const dk_oracle_opts* o = opts != nullptr ? opts : &defaults;
    dicke::CutoffPolicy policy;
    policy.n_max_initial = o->n_max_initial;
    policy.n_max_cap = o->n_max_cap;
    policy.shift_tol = o->shift_tol;
    const dicke::OracleSteadyResult res =
        dicke::oracle_steady_state(to_params(params), policy);
    out->sz = res.sz;
    out->sx = res.sx;
    out->x_quad = res.x_quad;
    out->photons = res.photons;
    out->a_re = res.a_mean.real();
    out->a_im = res.a_mean.imag();
    out->n_max = res.n_max;
  });
}

dk_status dk_cavity_correlation(const dk_params* params, double tau, double* re,
                                double* im) {
  return guarded([&] {
    require(re != nullptr && im != nullptr, "out must not be null");
    const dicke::Complex c = dicke::cavity_correlation(to_params(params), tau);
    *re = c.real();
    *im = c.imag();
  });
}

dk_status dk_oracle_decay(const dk_params* params, double tilt, double t_final,
                          dk_damping_fit* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const dicke::DampingFit fit =
        dicke::oracle_decay_rates(to_params(params), tilt, t_final);
    out->decay_rate = fit.decay_rate;
    out->frequency = fit.frequency;
    out->residual = fit.residual;
  });
}

}  // extern "C"
