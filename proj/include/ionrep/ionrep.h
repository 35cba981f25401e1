/* SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ionrep Authors
 *
 * C interface to the ionrep capacity-planning library for multiplexed
 * dual-species trapped-ion repeater chains.
 *
 * Conventions:
 *   - Every fallible call returns an ionrep_status; IONREP_OK is zero.
 *   - On failure, ionrep_last_error() returns a thread-local message that
 *     stays valid until the next failing call on the same thread.
 *   - Times are in seconds and distances in km.
 *   - Handles are opaque and owned by the caller; release them with the
 *     matching *_destroy function. Destroying NULL is a no-op.
 */
#ifndef IONREP_IONREP_H
#define IONREP_IONREP_H

#include <stddef.h>
#include <stdint.h>

#if defined(IONREP_BUILDING_LIBRARY)
#define IONREP_API __attribute__((visibility("default")))
#else
#define IONREP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ionrep_status {
  IONREP_OK = 0,
  IONREP_ERR_NULL_ARGUMENT = 1,
  IONREP_ERR_PARAMETER = 2,   /* a value lies outside its domain */
  IONREP_ERR_UNKNOWN_KEY = 3, /* ionrep_profile_set/get with an unknown key */
  IONREP_ERR_FEASIBILITY = 4, /* memory lifetime cannot cover the block */
  IONREP_ERR_INFEASIBLE = 5,  /* optimizer found no admissible point */
  IONREP_ERR_OUT_OF_RANGE = 6,
  IONREP_ERR_INTERNAL = 99
} ionrep_status;

typedef enum ionrep_regime {
  IONREP_REGIME_A = 0,
  IONREP_REGIME_B1 = 1,
  IONREP_REGIME_B2 = 2,
  IONREP_REGIME_C1 = 3,
  IONREP_REGIME_C2 = 4
} ionrep_regime;

typedef enum ionrep_condition {
  IONREP_COND_HERALD_GE_COMM_LIFETIME = 0,   /* T >= tau_o */
  IONREP_COND_HERALD_GE_GATE = 1,            /* T >= tau_g */
  IONREP_COND_HERALD_PLUS_GATE_GT_LIFETIME = 2 /* T + tau_g > tau_o */
} ionrep_condition;

IONREP_API const char* ionrep_version(void);
IONREP_API const char* ionrep_last_error(void);
IONREP_API const char* ionrep_status_name(ionrep_status status);
IONREP_API const char* ionrep_regime_name(ionrep_regime regime);

/* ---- hardware profile ------------------------------------------------ */

typedef struct ionrep_profile ionrep_profile;

/* Baseline: tau = tau_g = 1 us, tau_o = 50 us, tau_m = 60 s, eta_c = 0.3,
 * eta_d = 0.8, alpha = 0.2 dB/km, n_ref = 1.47, eps_g = 1e-4,
 * f0 = 1 - 1e-4, memory_margin = 10. */
IONREP_API ionrep_profile* ionrep_profile_create(void);
IONREP_API ionrep_profile* ionrep_profile_clone(const ionrep_profile* profile);
IONREP_API void ionrep_profile_destroy(ionrep_profile* profile);

/* Keys: eta_c, eta_d, alpha_db_per_km, refractive_index, tau, tau_g, tau_o,
 * tau_m, f0, eps_g, memory_margin. Setting does not validate; call
 * ionrep_profile_validate or rely on the evaluating call. */
IONREP_API ionrep_status ionrep_profile_set(ionrep_profile* profile, const char* key, double value);
IONREP_API ionrep_status ionrep_profile_get(const ionrep_profile* profile, const char* key, double* value);
IONREP_API ionrep_status ionrep_profile_validate(const ionrep_profile* profile);

/* ---- pointwise physics ------------------------------------------------ */

IONREP_API ionrep_status ionrep_link_success_prob(const ionrep_profile* profile, double l0_km, double* p);
IONREP_API ionrep_status ionrep_heralding_time(double l0_km, double refractive_index, double* seconds);
IONREP_API ionrep_status ionrep_end_to_end_fidelity(const ionrep_profile* profile, int64_t n_repeaters,
                                                    double* fidelity, int* out_of_domain);
IONREP_API ionrep_status ionrep_werner_rci(double fidelity, double* rci);

/* ---- rates -------------------------------------------------------------- */

typedef struct ionrep_layout {
  double total_distance_km;
  int64_t n_repeaters;
  int64_t spatial_mux; /* M */
  int64_t time_mux;    /* m */
} ionrep_layout;

typedef struct ionrep_rate_report {
  ionrep_regime regime;
  double p;
  double block_success;
  double denominator_steps;
  double ideal_rate; /* ebits/s */
  double f_end;
  double rci;
  double noisy_rate; /* ebits/s */
  double heralding_time_s;
  double j_steps;
  double k_steps;
  int64_t n_o;
  int64_t n_m;
  int n_m_is_upper_bound;
  int q_out_of_domain;
} ionrep_rate_report;

typedef struct ionrep_classification {
  ionrep_regime regime;
  int path_length;               /* number of evaluated branch conditions */
  ionrep_condition conditions[3];
  int outcomes[3];               /* 1 if the condition held */
} ionrep_classification;

IONREP_API ionrep_status ionrep_classify(const ionrep_profile* profile, double heralding_time_s,
                                         ionrep_classification* out);
IONREP_API ionrep_status ionrep_evaluate_rate(const ionrep_profile* profile, const ionrep_layout* layout,
                                              ionrep_rate_report* out);
/* As ionrep_evaluate_rate with the link success probability given. */
IONREP_API ionrep_status ionrep_evaluate_rate_at_p(const ionrep_profile* profile, const ionrep_layout* layout,
                                                   double p, ionrep_rate_report* out);
IONREP_API ionrep_status ionrep_plob_bound(double eta, int64_t spatial_mux, double tau, double* out);
/* PLOB bound of the bare fiber (alpha from the profile) over total_km. */
IONREP_API ionrep_status ionrep_direct_transmission_bound(const ionrep_profile* profile, double total_km,
                                                          int64_t spatial_mux, double* out);

typedef struct ionrep_reference_rates {
  double r0;
  double r1;
  double r2;
  double r;
} ionrep_reference_rates;

IONREP_API ionrep_status ionrep_reference_rates_eval(int64_t n_repeaters, int64_t time_mux, int64_t spatial_mux,
                                                     double p, double q, double tau, ionrep_reference_rates* out);

/* ---- optimizer ---------------------------------------------------------- */

typedef struct ionrep_bounds {
  int64_t n_max;
  int64_t m_max;
} ionrep_bounds;

/* Fields are active only when the matching has_* flag is nonzero. */
typedef struct ionrep_constraints {
  int has_n_o_max;
  int64_t n_o_max;
  int has_n_m_max;
  int64_t n_m_max;
  int has_fixed_l0;
  double fixed_l0_km;
  int has_fixed_n;
  int64_t fixed_n;
  int has_tau_min;
  double tau_min;
} ionrep_constraints;

#define IONREP_MAX_BINDING 4

typedef struct ionrep_opt_result {
  int64_t n_opt;
  int64_t m_opt;
  ionrep_rate_report report;
  int boundary_hit_n;
  int boundary_hit_m;
  int64_t evaluations;
  int binding_count;
  const char* binding[IONREP_MAX_BINDING]; /* static strings */
} ionrep_opt_result;

IONREP_API void ionrep_bounds_default(ionrep_bounds* bounds);
IONREP_API void ionrep_constraints_none(ionrep_constraints* constraints);

/* threads == 0 selects IONREP_THREADS or the machine parallelism.
 * IONREP_ERR_INFEASIBLE leaves the binding constraint names in
 * out->binding when out is non-NULL. */
IONREP_API ionrep_status ionrep_optimize(const ionrep_profile* profile, double total_km, int64_t spatial_mux,
                                         const ionrep_bounds* bounds, const ionrep_constraints* constraints,
                                         unsigned threads, ionrep_opt_result* out);

typedef struct ionrep_sweep ionrep_sweep;

typedef struct ionrep_sweep_row {
  double total_km;
  double plob;
  int feasible;
  ionrep_opt_result result; /* zeroed when infeasible */
  const char* error;        /* owned by the sweep handle; "" when feasible */
} ionrep_sweep_row;

IONREP_API ionrep_status ionrep_sweep_run(const ionrep_profile* profile, const double* distances_km, size_t count,
                                          int64_t spatial_mux, const ionrep_bounds* bounds,
                                          const ionrep_constraints* constraints, unsigned threads,
                                          ionrep_sweep** out);
IONREP_API size_t ionrep_sweep_size(const ionrep_sweep* sweep);
IONREP_API ionrep_status ionrep_sweep_row_get(const ionrep_sweep* sweep, size_t index, ionrep_sweep_row* out);
IONREP_API void ionrep_sweep_destroy(ionrep_sweep* sweep);

/* grid may be NULL (count 0) for the default 1..500 km grid. *found is 0
 * when no grid distance beats the bound. */
IONREP_API ionrep_status ionrep_crossover_distance(const ionrep_profile* profile, int64_t spatial_mux,
                                                   const ionrep_bounds* bounds, const double* grid_km,
                                                   size_t count, unsigned threads, double* distance_km,
                                                   int* found);

/* ---- Monte Carlo ------------------------------------------------------- */

typedef struct ionrep_sim_config {
  int64_t n_repeaters;
  int64_t spatial_mux;
  int64_t time_mux;
  int64_t j_steps;
  int64_t k_steps;
  double comm_lifetime_steps;
  double tau;
  double p;
  int64_t n_comm_ions; /* 0 = unlimited */
  int64_t n_mem_ions;  /* 0 = unlimited */
  int64_t num_blocks;
  uint64_t seed;
  int64_t trace_blocks;
  unsigned threads;
} ionrep_sim_config;

/* Quantizes a physical layout onto the integer clock. p_override < 0
 * derives p from the profile's optics. */
IONREP_API ionrep_status ionrep_sim_config_from_layout(const ionrep_profile* profile, const ionrep_layout* layout,
                                                       double p_override, ionrep_sim_config* out);

typedef struct ionrep_sim_stats {
  ionrep_regime regime;
  int64_t blocks_run;
  int64_t successes;
  double empirical_block_success;
  double empirical_rate;
  int64_t block_wall_steps;
  int64_t peak_comm_loaded;
  int64_t peak_mem_loaded;
  int64_t peak_heralded;
  int64_t dropped_comm;
  int64_t dropped_mem;
} ionrep_sim_stats;

typedef struct ionrep_sim ionrep_sim;

IONREP_API ionrep_status ionrep_simulate(const ionrep_sim_config* config, ionrep_sim** out);
IONREP_API ionrep_status ionrep_sim_stats_get(const ionrep_sim* sim, ionrep_sim_stats* out);
IONREP_API size_t ionrep_sim_trace_size(const ionrep_sim* sim);
/* Writes one "block,step,node,event,count" line (no newline) into buf. */
IONREP_API ionrep_status ionrep_sim_trace_line(const ionrep_sim* sim, size_t index, char* buf, size_t buf_size);
IONREP_API const char* ionrep_sim_trace_header(void);
IONREP_API void ionrep_sim_destroy(ionrep_sim* sim);

typedef struct ionrep_verdict {
  int pass;
  double expected_block_success;
  double empirical_block_success;
  double z_score;
  int success_ok;
  int comm_ok;
  int mem_ok;
  int64_t expected_n_o;
  int64_t expected_n_m;
  int64_t analytic_n_o;
  int64_t n_o_quantization_delta;
  double quantization_delta_steps;
} ionrep_verdict;

IONREP_API ionrep_status ionrep_validate(const ionrep_sim* sim, const ionrep_rate_report* report, double sigma,
                                         ionrep_verdict* out);

IONREP_API ionrep_status ionrep_sample_end_to_end_q(const ionrep_profile* profile, int64_t n_repeaters,
                                                    int64_t trials, uint64_t seed, double* q, double* std_error,
                                                    int* out_of_domain);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* IONREP_IONREP_H */
