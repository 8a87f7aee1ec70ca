/*
 * bellsim: two-station Bell test simulator with polarization-dependent
 * detection delays and time-window coincidence selection.
 *
 * Plain C interface over opaque handles. Every function that can fail returns
 * a bellsim_status; on failure bellsim_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread).
 * Angles are radians, times nanoseconds. Stations are numbered 1 and 2.
 */
#ifndef BELLSIM_BELLSIM_H
#define BELLSIM_BELLSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BELLSIM_BUILDING)
#    define BELLSIM_API __declspec(dllexport)
#  else
#    define BELLSIM_API __declspec(dllimport)
#  endif
#else
#  define BELLSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bellsim_status {
    BELLSIM_OK = 0,
    BELLSIM_ERR_INVALID_ARGUMENT = 1,
    BELLSIM_ERR_PARSE = 2,
    BELLSIM_ERR_VERSION = 3,
    BELLSIM_ERR_IO = 4,
    BELLSIM_ERR_MISMATCH = 5,
    BELLSIM_ERR_EMPTY_CELL = 6,
    BELLSIM_ERR_MISSING_COMBINATION = 7,
    BELLSIM_ERR_QUADRATURE = 8,
    BELLSIM_ERR_NO_COINCIDENCES = 9,
    BELLSIM_ERR_INTERNAL = 10
} bellsim_status;

typedef enum bellsim_match_policy {
    BELLSIM_MATCH_PAIRED = 0, /* by pair id */
    BELLSIM_MATCH_STREAM = 1  /* greedy nearest neighbour on time tags */
} bellsim_match_policy;

typedef enum bellsim_quadrature_method {
    BELLSIM_QUAD_ADAPTIVE = 0,
    BELLSIM_QUAD_FIXED_GRID = 1
} bellsim_quadrature_method;

typedef struct bellsim_model_params {
    double d;      /* delay exponent, >= 0 */
    double t0;     /* maximal delay, > 0 */
    double window; /* coincidence window, >= 0 */
} bellsim_model_params;

typedef struct bellsim_quadrature {
    bellsim_quadrature_method method;
    double tolerance;
    size_t max_subdivisions;
    size_t grid_panels;
} bellsim_quadrature;

typedef struct bellsim_event {
    double time_tag;
    uint64_t pair_id;
    uint32_t setting_index;
    int32_t outcome; /* +1 or -1 */
    int32_t station; /* 1 or 2 */
} bellsim_event;

typedef struct bellsim_counts {
    uint64_t pp, pm, mp, mm;
} bellsim_counts;

typedef struct bellsim_quadruple {
    double a, a_prime, b, b_prime;
} bellsim_quadruple;

typedef struct bellsim_chsh_result {
    double s;
    double standard_error;
    double correlations[4]; /* E(a,b), E(a,b'), E(a',b), E(a',b') */
} bellsim_chsh_result;

typedef struct bellsim_sweep_point {
    double window;
    double s;
    double standard_error;
    double coincidence_rate;
} bellsim_sweep_point;

typedef struct bellsim_config bellsim_config;
typedef struct bellsim_log bellsim_log;
typedef struct bellsim_coincidences bellsim_coincidences;
typedef struct bellsim_table bellsim_table;
typedef struct bellsim_sweep bellsim_sweep;

BELLSIM_API const char* bellsim_version(void);
BELLSIM_API const char* bellsim_last_error(void);
BELLSIM_API const char* bellsim_status_name(bellsim_status status);

/* Defaults: d = 4, t0 = 1000, window = 10. */
BELLSIM_API bellsim_model_params bellsim_default_params(void);
/* Defaults: adaptive, tolerance 1e-8. */
BELLSIM_API bellsim_quadrature bellsim_default_quadrature(void);
/* (0, pi/4, pi/8, 3pi/8) */
BELLSIM_API bellsim_quadruple bellsim_default_quadruple(void);

/* ---- model ---------------------------------------------------------- */

BELLSIM_API bellsim_status bellsim_outcome_prob(int x, double zeta, double* out);
BELLSIM_API bellsim_status bellsim_delay_timescale(double zeta,
                                                   const bellsim_model_params* params,
                                                   double* out);

/* ---- configuration -------------------------------------------------- */

BELLSIM_API bellsim_status bellsim_config_create(bellsim_config** out);
BELLSIM_API void bellsim_config_destroy(bellsim_config* config);
BELLSIM_API bellsim_status bellsim_config_set_params(bellsim_config* config,
                                                     const bellsim_model_params* params);
BELLSIM_API bellsim_status bellsim_config_get_params(const bellsim_config* config,
                                                     bellsim_model_params* out);
BELLSIM_API bellsim_status bellsim_config_set_settings(bellsim_config* config, int station,
                                                       const double* angles, size_t count);
/* Deterministic schedule cycled by pair id; count = 0 restores random choice. */
BELLSIM_API bellsim_status bellsim_config_set_schedule(bellsim_config* config, int station,
                                                       const uint32_t* indices, size_t count);
BELLSIM_API bellsim_status bellsim_config_set_pairs(bellsim_config* config, uint64_t n_pairs);
BELLSIM_API bellsim_status bellsim_config_set_seed(bellsim_config* config, uint64_t seed);
/* interval <= 0 restores the default of 10 t0. */
BELLSIM_API bellsim_status bellsim_config_set_emission_regular(bellsim_config* config,
                                                               double interval);
BELLSIM_API bellsim_status bellsim_config_set_emission_poisson(bellsim_config* config,
                                                               double rate);
/* 0 = hardware concurrency. Results never depend on this value. */
BELLSIM_API bellsim_status bellsim_config_set_workers(bellsim_config* config, unsigned workers);
BELLSIM_API bellsim_status bellsim_config_validate(const bellsim_config* config);

/* ---- simulation and time-tag files ---------------------------------- */

BELLSIM_API bellsim_status bellsim_run_experiment(const bellsim_config* config,
                                                  bellsim_log** out);
BELLSIM_API void bellsim_log_destroy(bellsim_log* log);
BELLSIM_API bellsim_status bellsim_log_pair_count(const bellsim_log* log, uint64_t* out);
BELLSIM_API bellsim_status bellsim_log_event_count(const bellsim_log* log, int station,
                                                   size_t* out);
BELLSIM_API bellsim_status bellsim_log_get_event(const bellsim_log* log, int station,
                                                 size_t index, bellsim_event* out);
/* Writes <prefix>_station1.csv and <prefix>_station2.csv. */
BELLSIM_API bellsim_status bellsim_write_tags(const bellsim_log* log, const char* prefix);
BELLSIM_API bellsim_status bellsim_read_tags(const char* prefix, bellsim_log** out);
/* Replaces the setting angles of a log (e.g. for files written without them). */
BELLSIM_API bellsim_status bellsim_log_set_settings(bellsim_log* log, int station,
                                                    const double* angles, size_t count);

/* ---- coincidences --------------------------------------------------- */

BELLSIM_API bellsim_status bellsim_match(const bellsim_log* log, double window,
                                         bellsim_match_policy policy,
                                         bellsim_coincidences** out);
BELLSIM_API void bellsim_coincidences_destroy(bellsim_coincidences* c);
BELLSIM_API bellsim_status bellsim_coincidences_count(const bellsim_coincidences* c,
                                                      size_t* out);
BELLSIM_API bellsim_status bellsim_coincidences_get(const bellsim_coincidences* c, size_t index,
                                                    bellsim_event* first, bellsim_event* second,
                                                    double* dt);
BELLSIM_API bellsim_status bellsim_coincidence_rate(const bellsim_log* log, double window,
                                                    bellsim_match_policy policy, double* out);

/* ---- analysis ------------------------------------------------------- */

/* Uses the setting angles carried by the log. */
BELLSIM_API bellsim_status bellsim_tabulate(const bellsim_coincidences* c,
                                            const bellsim_log* log, bellsim_table** out);
BELLSIM_API void bellsim_table_destroy(bellsim_table* table);
BELLSIM_API bellsim_status bellsim_table_dims(const bellsim_table* table, size_t* rows,
                                              size_t* cols);
BELLSIM_API bellsim_status bellsim_table_counts(const bellsim_table* table, size_t row,
                                                size_t col, bellsim_counts* out);
BELLSIM_API bellsim_status bellsim_table_correlation(const bellsim_table* table, size_t row,
                                                     size_t col, double* e, double* stderr_out);
BELLSIM_API bellsim_status bellsim_chsh(const bellsim_table* table,
                                        const bellsim_quadruple* quadruple,
                                        bellsim_chsh_result* out);
BELLSIM_API bellsim_status bellsim_table_write_csv(const bellsim_table* table, const char* path);

/* Simulates once and re-filters per window unless `independent` is nonzero. */
BELLSIM_API bellsim_status bellsim_window_sweep(const bellsim_config* config,
                                                const double* windows, size_t count,
                                                const bellsim_quadruple* quadruple,
                                                bellsim_match_policy policy, int independent,
                                                bellsim_sweep** out);
BELLSIM_API bellsim_status bellsim_log_window_sweep(const bellsim_log* log,
                                                    const double* windows, size_t count,
                                                    const bellsim_quadruple* quadruple,
                                                    bellsim_match_policy policy,
                                                    bellsim_sweep** out);
BELLSIM_API void bellsim_sweep_destroy(bellsim_sweep* sweep);
BELLSIM_API bellsim_status bellsim_sweep_count(const bellsim_sweep* sweep, size_t* out);
BELLSIM_API bellsim_status bellsim_sweep_get(const bellsim_sweep* sweep, size_t index,
                                             bellsim_sweep_point* out);
/* Writes up to `capacity` crossings of `level`; `*found` gets the total. */
BELLSIM_API bellsim_status bellsim_sweep_crossings(const bellsim_sweep* sweep, double level,
                                                   double* out, size_t capacity,
                                                   size_t* found);
BELLSIM_API bellsim_status bellsim_sweep_write_csv(const bellsim_sweep* sweep,
                                                   const char* path);
/* Window grid: lo..hi inclusive, `logarithmic` nonzero for log spacing. */
BELLSIM_API bellsim_status bellsim_window_grid(double lo, double hi, size_t count,
                                               int logarithmic, double* out);

/* ---- exact model predictions ---------------------------------------- */

BELLSIM_API bellsim_status bellsim_weight_exact(double t1, double t2, double window,
                                                double* out);
BELLSIM_API bellsim_status bellsim_weight_approx(double t1, double t2, double window,
                                                 double* out);
/* quad may be NULL for defaults. */
BELLSIM_API bellsim_status bellsim_joint_prob(int x1, int x2, double a1, double a2,
                                              const bellsim_model_params* params,
                                              const bellsim_quadrature* quad, double* out);
BELLSIM_API bellsim_status bellsim_correlation_exact(double a1, double a2,
                                                     const bellsim_model_params* params,
                                                     const bellsim_quadrature* quad,
                                                     double* out);
BELLSIM_API bellsim_status bellsim_coincidence_probability(double a1, double a2,
                                                           const bellsim_model_params* params,
                                                           const bellsim_quadrature* quad,
                                                           double* out);
BELLSIM_API bellsim_status bellsim_chsh_exact(const bellsim_quadruple* quadruple,
                                              const bellsim_model_params* params,
                                              const bellsim_quadrature* quad, double* out);
BELLSIM_API double bellsim_singlet_correlation(double a1, double a2);
BELLSIM_API double bellsim_mixed_correlation(double a1, double a2);
/* CSV of E(delta) for `points` deltas evenly spaced on [0, pi). */
BELLSIM_API bellsim_status bellsim_write_reference_csv(const bellsim_model_params* params,
                                                       const bellsim_quadrature* quad,
                                                       size_t points, const char* path);
/* Rows of CHSH results with labels. */
BELLSIM_API bellsim_status bellsim_write_chsh_csv(const char* path, const char* const* labels,
                                                  const bellsim_chsh_result* rows,
                                                  size_t count);

#ifdef __cplusplus
}
#endif

#endif /* BELLSIM_BELLSIM_H */
