/* dicke.h: C API of the dicke shared library.
 *
 * Simulation of atom-only Redfield descriptions of the driven-dissipative
 * Dicke model: rate coefficients, steady states, time evolution, damping
 * fits, semiclassical fixed points and stability, and a brute-force
 * atom+cavity oracle.
 *
 * Every function returns DK_OK (0) on success or a dk_status error code;
 * dk_error_message() returns a thread-local description of the last error.
 * Results are plain structs or opaque handles; handles must be released
 * with their _free function. All calls are thread-safe as long as each
 * handle is used from one thread at a time.
 */

#ifndef DICKE_H
#define DICKE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dk_status {
  DK_OK = 0,
  DK_ERR_INVALID_ARGUMENT = 1,
  DK_ERR_NUMERICAL = 2,
  DK_ERR_RESOURCE_LIMIT = 3,
  DK_ERR_UNSUPPORTED = 4,
  DK_ERR_INTERNAL = 5
} dk_status;

typedef enum dk_mode {
  DK_MODE_FULL = 0,
  DK_MODE_SECULAR = 1,
  DK_MODE_LARGE_DETUNING = 2,
  DK_MODE_SECULAR_LARGE_DETUNING = 3
} dk_mode;

/* Physical parameters in units where omega = 1 by convention. */
typedef struct dk_params {
  double omega0; /* atomic splitting */
  double omega;  /* cavity detuning from the pump */
  double kappa;  /* cavity linewidth */
  double g;      /* matter-light coupling per atom */
  int n_atoms;
} dk_params;

const char* dk_version(void);
const char* dk_status_name(dk_status status);
/* Thread-local message for the most recent failing call. */
const char* dk_error_message(void);

/* ---- rates and operator form -------------------------------------- */

typedef struct dk_rates {
  double q_plus_re, q_plus_im;
  double q_minus_re, q_minus_im;
  double q0_re, q0_im;
  double q1_re, q1_im;
} dk_rates;

dk_status dk_compute_rates(const dk_params* params, dk_rates* out);

/* g_c sqrt(N); requires omega > 0 and omega0 > 0. */
dk_status dk_critical_coupling(const dk_params* params, double* gc_sqrt_n);

/* Eigenvalues of the Kossakowski matrix, descending; xi is 0 or 1. */
dk_status dk_kossakowski_spectrum(const dk_params* params, int xi,
                                  double eigenvalues[2]);

/* ---- steady states ------------------------------------------------- */

typedef struct dk_steady_result {
  double sx, sy, sz;
  double sz2;      /* <(S^z)^2> */
  double purity;   /* tr(rho^2) */
  double min_eig;  /* smallest eigenvalue of rho */
  double residual; /* ||L rho|| on the population parity sector */
  double generator_norm;
  int degenerate;  /* 1 when the null space is degenerate (g = 0) */
} dk_steady_result;

dk_status dk_steady_state(const dk_params* params, dk_mode mode,
                          dk_steady_result* out);

/* Semiclassical steady <S^z>/(N/2) of the stable attractor:
 * -1 below threshold, -gc^2/g^2 above. */
dk_status dk_semiclassical_steady_sz(const dk_params* params, double* sz_scaled);

/* Brillouin function B_S(x). */
dk_status dk_brillouin(double spin, double x, double* value);

/* Large-S secular pole selection: sign = sign(Q+' - Q-') in {-1, 0, +1};
 * crossover = 1 inside the |Q+'/Q-' - 1| <~ 1/S window. */
dk_status dk_secular_sz_sign(const dk_params* params, int* sign, int* crossover);

/* Coordinate-format text dump (row col re im) of the vectorized generator
 * on the population parity sector. */
dk_status dk_generator_dump(const dk_params* params, dk_mode mode,
                            const char* path);

/* ---- time evolution ------------------------------------------------ */

typedef struct dk_evolve_opts {
  double t_final;   /* > 0 */
  int n_samples;    /* uniform grid including both endpoints, >= 2 */
  double rel_tol;   /* integrator relative tolerance */
  double abs_tol;   /* integrator absolute tolerance */
  double tilt;      /* rotation of the all-down initial state about y */
} dk_evolve_opts;

/* Fill with the defaults: t_final 100, 201 samples, 1e-9/1e-12, tilt 1e-3. */
void dk_evolve_opts_init(dk_evolve_opts* opts);

typedef struct dk_evolution dk_evolution; /* opaque trajectory handle */

dk_status dk_evolve(const dk_params* params, dk_mode mode,
                    const dk_evolve_opts* opts, dk_evolution** out);
void dk_evolution_free(dk_evolution* evolution);

typedef enum dk_series {
  DK_SERIES_TIME = 0,
  DK_SERIES_SX = 1,
  DK_SERIES_SY = 2,
  DK_SERIES_SZ = 3,
  DK_SERIES_SZ2 = 4,
  DK_SERIES_PURITY = 5,
  DK_SERIES_MIN_EIG = 6,
  DK_SERIES_TRACE_ERR = 7
} dk_series;

size_t dk_evolution_length(const dk_evolution* evolution);
dk_status dk_evolution_series(const dk_evolution* evolution, dk_series series,
                              double* buffer, size_t length);
/* 1 when the trace error exceeded 1e-7 anywhere along the trajectory. */
int dk_evolution_trace_flagged(const dk_evolution* evolution);

typedef struct dk_damping_fit {
  double decay_rate; /* lambda' */
  double frequency;  /* |lambda''| */
  double residual;   /* relative rms misfit */
} dk_damping_fit;

/* Fit A exp(l't) cos(l''t + phi) + c to one observable of a trajectory. */
dk_status dk_fit_damping(const dk_evolution* evolution, dk_series observable,
                         dk_damping_fit* out);

/* ---- semiclassics -------------------------------------------------- */

/* kind: 0 normal, 1 superradiant; stability: 0 stable, 1 unstable, 2 marginal */
typedef struct dk_fixed_point {
  double sx, sy, sz;
  int kind;
  int stability;
} dk_fixed_point;

/* Writes up to capacity fixed points of the atom-only semiclassical flow;
 * *count receives the total. use_exact_rates = 0 selects the closed-form
 * large-detuning rate approximations (the paper's displayed formulas). */
dk_status dk_fixed_points(const dk_params* params, int use_exact_rates,
                          dk_fixed_point* buffer, size_t capacity,
                          size_t* count);

typedef struct dk_stability_report {
  double closed_re[2], closed_im[2]; /* quoted closed-form pair */
  double jac_re[3], jac_im[3];       /* 3x3 numerical Jacobian eigenvalues */
  double max_rel_deviation;
  int kind;
  int stability;
} dk_stability_report;

dk_status dk_stability(const dk_params* params, const dk_fixed_point* point,
                       int use_exact_rates, dk_stability_report* out);

/* ---- atom+cavity oracle -------------------------------------------- */

typedef struct dk_oracle_opts {
  int n_max_initial; /* 0: auto (8 below threshold, 16 above) */
  int n_max_cap;     /* default 256 */
  double shift_tol;  /* observable shift per cutoff doubling, default 1e-8 */
} dk_oracle_opts;

void dk_oracle_opts_init(dk_oracle_opts* opts);

typedef struct dk_oracle_steady {
  double sz, sx;
  double x_quad;  /* <a + a'> */
  double photons; /* <a'a> */
  double a_re, a_im;
  int n_max; /* cutoff at which the observables converged */
} dk_oracle_steady;

/* Requires 0 < g and N <= 6. */
dk_status dk_oracle_steady_state(const dk_params* params,
                                 const dk_oracle_opts* opts,
                                 dk_oracle_steady* out);

/* Bare-cavity correlator Tr(X(tau) X(0) rho_vac); requires g = 0. */
dk_status dk_cavity_correlation(const dk_params* params, double tau,
                                double* re, double* im);

/* Ring-down fit of <Sx>(t) in the joint model; requires g < g_c, N <= 6.
 * t_final = 0 selects an automatic protocol length. */
dk_status dk_oracle_decay(const dk_params* params, double tilt, double t_final,
                          dk_damping_fit* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DICKE_H */
