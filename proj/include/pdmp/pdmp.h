/* Copyright 2026 The pdmp-switch Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of libpdmp: two-mode switching between scalar bifurcation
 * normal forms, closed-form invariant densities and regime classification.
 *
 * Every fallible call returns a pdmp_status; on failure pdmp_last_error()
 * describes the problem (thread-local, valid until the next failing call on
 * the same thread). Handles are opaque and released with their _free call.
 * Strings returned through char** are owned by the caller and released with
 * pdmp_string_free.
 */
#ifndef PDMP_PDMP_H
#define PDMP_PDMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PDMP_API __declspec(dllexport)
#else
#define PDMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdmp_status {
  PDMP_OK = 0,
  PDMP_ERR_DOMAIN = 1,
  PDMP_ERR_REGIME = 2,
  PDMP_ERR_NUMERIC = 3,
  PDMP_ERR_IO = 4,
  PDMP_ERR_INVALID_ARG = 5,
  PDMP_ERR_INTERNAL = 6
} pdmp_status;

typedef enum pdmp_kind {
  PDMP_SUP_PITCHFORK = 0,
  PDMP_SUB_PITCHFORK = 1,
  PDMP_TRANSCRITICAL = 2,
  PDMP_FOLD = 3,
  PDMP_SUP_HOPF = 4,
  PDMP_SUB_HOPF = 5
} pdmp_kind;

/* Trajectory terminal status. */
enum { PDMP_HORIZON_REACHED = 0, PDMP_BLEW_UP = 1, PDMP_ABSORBED = 2 };
/* Histogram / density selectors. */
enum { PDMP_SEL_MINUS = -1, PDMP_SEL_MARGINAL = 0, PDMP_SEL_PLUS = 1 };

PDMP_API const char* pdmp_version(void);
PDMP_API const char* pdmp_last_error(void);
PDMP_API void pdmp_string_free(char* s);

/* Kebab-case names: sup-pitchfork, sub-pitchfork, transcritical, fold,
   sup-hopf, sub-hopf. */
PDMP_API pdmp_status pdmp_kind_from_name(const char* name, pdmp_kind* out);
PDMP_API const char* pdmp_kind_name(pdmp_kind kind);

typedef struct pdmp_switching_spec {
  pdmp_kind kind;
  double p_minus;
  double p_plus;
  double lambda_minus; /* rate of leaving mode -1 */
  double lambda_plus;  /* rate of leaving mode +1 */
} pdmp_switching_spec;

typedef struct pdmp_stop {
  double horizon;
  double blowup_guard;     /* default 1e6 */
  double absorption_guard; /* default 1e-12 */
} pdmp_stop;

PDMP_API void pdmp_stop_default(pdmp_stop* stop);

/* ---- normal forms ---- */

typedef struct pdmp_flow_result {
  int blew_up;
  double x;      /* valid when !blew_up */
  double t_star; /* valid when blew_up */
  int direction; /* +1 or -1 when blew_up */
} pdmp_flow_result;

PDMP_API pdmp_status pdmp_eval_field(pdmp_kind kind, double p, double x, double* out);
PDMP_API pdmp_status pdmp_flow(pdmp_kind kind, double p, double x0, double t,
                               pdmp_flow_result* out);
/* *has_blow_up is set to 0 when the forward orbit stays bounded. */
PDMP_API pdmp_status pdmp_blow_up_time(pdmp_kind kind, double p, double x0, int* has_blow_up,
                                       double* t_star);
/* JSON array of {"x":..,"stability":"stable"|"unstable","degenerate":bool}. */
PDMP_API pdmp_status pdmp_equilibria_json(pdmp_kind kind, double p, char** out_json);
PDMP_API pdmp_status pdmp_linearize_at_zero(pdmp_kind kind, double p, double* out);

/* ---- regimes ---- */

PDMP_API pdmp_status pdmp_average_growth_rate(double p_minus, double p_plus,
                                              double lambda_minus, double lambda_plus,
                                              double* out);
PDMP_API pdmp_status pdmp_classify_json(const pdmp_switching_spec* spec, char** out_json);

typedef struct pdmp_growth_estimate {
  double lambda_hat;
  double std_err;
  size_t samples_used;
  size_t runs;
} pdmp_growth_estimate;

/* guard <= 0 selects the default nonlinearity guard. */
PDMP_API pdmp_status pdmp_lyapunov_estimate(const pdmp_switching_spec* spec, double x0,
                                            double horizon, size_t runs, uint64_t seed,
                                            double guard, pdmp_growth_estimate* out);

/* ---- trajectories ---- */

typedef struct pdmp_trajectory pdmp_trajectory;

typedef struct pdmp_segment {
  double t_start;
  double x_start;
  int mode;
  double duration;
} pdmp_segment;

typedef struct pdmp_trajectory_info {
  int status;    /* PDMP_HORIZON_REACHED, PDMP_BLEW_UP or PDMP_ABSORBED */
  double t_end;
  double x_end;
  int direction; /* blow-up direction, 0 otherwise */
  size_t segments;
  uint64_t seed;
  int has_guard_time;
  double guard_time;
} pdmp_trajectory_info;

PDMP_API pdmp_status pdmp_simulate(const pdmp_switching_spec* spec, double x0, int i0,
                                   const pdmp_stop* stop, uint64_t seed,
                                   pdmp_trajectory** out);
PDMP_API void pdmp_trajectory_free(pdmp_trajectory* traj);
PDMP_API pdmp_status pdmp_trajectory_info_get(const pdmp_trajectory* traj,
                                              pdmp_trajectory_info* out);
PDMP_API pdmp_status pdmp_trajectory_segment(const pdmp_trajectory* traj, size_t k,
                                             pdmp_segment* out);
PDMP_API pdmp_status pdmp_trajectory_state_at(const pdmp_trajectory* traj, double t,
                                              double* out);
PDMP_API pdmp_status pdmp_trajectory_validate(const pdmp_trajectory* traj);
PDMP_API pdmp_status pdmp_trajectory_csv(const pdmp_trajectory* traj, char** out_csv);

/* ---- ensembles ---- */

typedef struct pdmp_ensemble pdmp_ensemble;

typedef struct pdmp_initial {
  double x0;
  int mode;
} pdmp_initial;

/* Run k starts from initial[k % n_initial]; threads == 0 uses all cores.
   Results do not depend on the thread count. */
PDMP_API pdmp_status pdmp_simulate_ensemble(const pdmp_switching_spec* spec,
                                            const pdmp_initial* initial, size_t n_initial,
                                            const pdmp_stop* stop, size_t n,
                                            uint64_t base_seed, unsigned threads,
                                            pdmp_ensemble** out);
PDMP_API void pdmp_ensemble_free(pdmp_ensemble* ens);
PDMP_API size_t pdmp_ensemble_size(const pdmp_ensemble* ens);
/* Borrowed view, valid while the ensemble lives. */
PDMP_API const pdmp_trajectory* pdmp_ensemble_at(const pdmp_ensemble* ens, size_t k);
PDMP_API pdmp_status pdmp_ensemble_blowup_fraction(const pdmp_ensemble* ens, double* fraction);
PDMP_API pdmp_status pdmp_ensemble_summary_json(const pdmp_ensemble* ens, char** out_json);

/* n points uniform on [lo, hi) drawn from a stream derived from seed. */
PDMP_API pdmp_status pdmp_uniform_initials(double lo, double hi, size_t n, uint64_t seed,
                                           double* out);

/* ---- occupation histograms ---- */

typedef struct pdmp_histogram pdmp_histogram;

/* burn_in / sample_dt <= 0 select 100/min(lambda) and 0.1/max(lambda). */
PDMP_API pdmp_status pdmp_histogram_from_trajectory(const pdmp_trajectory* traj, size_t bins,
                                                    double lo, double hi, double burn_in,
                                                    double sample_dt, pdmp_histogram** out);
PDMP_API void pdmp_histogram_free(pdmp_histogram* hist);
PDMP_API size_t pdmp_histogram_bins(const pdmp_histogram* hist);
PDMP_API uint64_t pdmp_histogram_total(const pdmp_histogram* hist);
/* Writes bins values into out. */
PDMP_API pdmp_status pdmp_histogram_density(const pdmp_histogram* hist, int selector,
                                            double* out);
PDMP_API pdmp_status pdmp_histogram_mass(const pdmp_histogram* hist, int selector,
                                         double* out);
PDMP_API pdmp_status pdmp_histogram_csv(const pdmp_histogram* hist, char** out_csv);

PDMP_API pdmp_status pdmp_ks_uniform(const double* samples, size_t n, double lo, double hi,
                                     double* out);

/* ---- invariant densities ---- */

typedef struct pdmp_density pdmp_density;

typedef struct pdmp_density_info {
  double support_end;
  double normalization;
  double log_normalization;
  double mass_minus;
  double mass_plus;
  double x_exp;
  double left_exp;
  double right_exp;
  double quadrature_error;
} pdmp_density_info;

/* tol <= 0 selects 1e-10. */
PDMP_API pdmp_status pdmp_density_create(const pdmp_switching_spec* spec, double tol,
                                         pdmp_density** out);
PDMP_API void pdmp_density_free(pdmp_density* d);
PDMP_API pdmp_status pdmp_density_info_get(const pdmp_density* d, pdmp_density_info* out);
PDMP_API pdmp_status pdmp_density_eval(const pdmp_density* d, int selector, double x,
                                       double* out);
PDMP_API pdmp_status pdmp_density_mirror(const pdmp_density* d, int mode, double x,
                                         double* out);
PDMP_API pdmp_status pdmp_density_flux(const pdmp_density* d, double x, double* phi_minus,
                                       double* phi_plus);
PDMP_API pdmp_status pdmp_density_fp_residual(const pdmp_density* d, double x, double* r1,
                                              double* r2);
PDMP_API pdmp_status pdmp_density_l1(const pdmp_density* d, const pdmp_histogram* hist,
                                     int selector, double* out);
PDMP_API pdmp_status pdmp_density_table_csv(const pdmp_density* d, size_t n, char** out_csv);

/* ---- polar Hopf lift ---- */

typedef struct pdmp_planar pdmp_planar;

PDMP_API pdmp_status pdmp_hopf_simulate(const pdmp_switching_spec* spec, double theta0,
                                        double r0, int i0, const pdmp_stop* stop,
                                        uint64_t seed, pdmp_planar** out);
PDMP_API void pdmp_planar_free(pdmp_planar* p);
PDMP_API const pdmp_trajectory* pdmp_planar_radial(const pdmp_planar* p);
PDMP_API pdmp_status pdmp_planar_theta_at(const pdmp_planar* p, double t, double* out);
/* Angles sampled at burn_in + k*dt; *n_out receives the count (at most cap
   values are written, pass out = NULL to query the count). */
PDMP_API pdmp_status pdmp_planar_angles(const pdmp_planar* p, double burn_in, double dt,
                                        double* out, size_t cap, size_t* n_out);

/* ---- applications ---- */

PDMP_API pdmp_status pdmp_rm_field(double beta, double m, double p, double x, double y,
                                   double* dx, double* dy);
PDMP_API pdmp_status pdmp_rm_coexistence(double p, double* x, double* y);
PDMP_API pdmp_status pdmp_rm_hopf_trace(double p, double* out);

PDMP_API double pdmp_vdp_fast_field(double p, double x);
PDMP_API void pdmp_vdp_fold_points(double* lo, double* hi);
PDMP_API int pdmp_vdp_equilibrium_count(double p);

typedef struct pdmp_swarm_params {
  double q, w2, w3, ae, de, a0, d0;
} pdmp_swarm_params;

PDMP_API void pdmp_swarm_params_default(pdmp_swarm_params* params);
/* symmetrized != 0 selects the L<->R symmetric variant; the verbatim form
   needs a value for its undefined symbol L (verbatim_L != NULL). */
PDMP_API pdmp_status pdmp_swarm_field(const pdmp_swarm_params* params, const double state[5],
                                      int symmetrized, const double* verbatim_L,
                                      double out[5]);
PDMP_API pdmp_status pdmp_swarm_threshold(double q, double w3, double d0, double* out);
PDMP_API pdmp_status pdmp_swarm_ordered_branch(const pdmp_swarm_params* params,
                                               double* x1_plus, double* x1_minus);
PDMP_API pdmp_status pdmp_swarm_steady_state(const pdmp_swarm_params* params, double x1,
                                             double out[5]);

/* Generic switched ODE on R^dim integrated by fixed-step RK4. A field
   callback returns 0 on success; anything else aborts the run. */
typedef int (*pdmp_field_fn)(const double* x, double* dx, size_t dim, void* user);

typedef struct pdmp_general_spec {
  size_t dim;
  pdmp_field_fn field_minus;
  pdmp_field_fn field_plus;
  void* user;
  double lambda_minus;
  double lambda_plus;
  double step;          /* default 1e-3 when <= 0 */
  double escape_radius; /* default 1e6 when <= 0 */
} pdmp_general_spec;

typedef struct pdmp_general_trajectory pdmp_general_trajectory;

PDMP_API pdmp_status pdmp_general_simulate(const pdmp_general_spec* spec, const double* x0,
                                           int i0, double horizon, double record_dt,
                                           uint64_t seed, pdmp_general_trajectory** out);
/* Rosenzweig-MacArthur (m=1, beta=3) switched between carrying capacities
   p_minus and p_plus. */
PDMP_API pdmp_status pdmp_rm_switched_simulate(double p_minus, double p_plus,
                                               double lambda_minus, double lambda_plus,
                                               double x0, double y0, int i0, double horizon,
                                               double step, double record_dt, uint64_t seed,
                                               pdmp_general_trajectory** out);
PDMP_API void pdmp_general_free(pdmp_general_trajectory* g);
PDMP_API size_t pdmp_general_dim(const pdmp_general_trajectory* g);
PDMP_API size_t pdmp_general_records(const pdmp_general_trajectory* g);
/* Writes dim values into x. */
PDMP_API pdmp_status pdmp_general_record(const pdmp_general_trajectory* g, size_t k, double* t,
                                         double* x, int* mode);
/* 1 for numeric escape beyond the escape radius, 0 when the horizon was reached. */
PDMP_API int pdmp_general_escaped(const pdmp_general_trajectory* g);
PDMP_API size_t pdmp_general_switches(const pdmp_general_trajectory* g);
PDMP_API pdmp_status pdmp_general_csv(const pdmp_general_trajectory* g, char** out_csv);

/* ---- files ---- */

/* Temp file + rename. */
PDMP_API pdmp_status pdmp_write_file_atomic(const char* path, const char* data, size_t len);
/* Shortest round-trip decimal form of v into buf (at least 32 bytes). */
PDMP_API pdmp_status pdmp_format_double(double v, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* PDMP_PDMP_H */
