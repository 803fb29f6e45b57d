/*
 * tmrpca.h - C interface to the traffic-matrix decomposition library.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns a tmr_status; on
 * failure tmr_last_error() describes the problem (per calling thread).
 * Matrices cross the boundary as row-major double arrays.
 */
#ifndef TMRPCA_H
#define TMRPCA_H

#include <stddef.h>
#include <stdint.h>

#if defined(TMRPCA_BUILDING_LIBRARY)
#  define TMR_API __attribute__((visibility("default")))
#else
#  define TMR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tmr_status {
  TMR_OK = 0,
  TMR_INVALID_ARGUMENT = 1,
  TMR_PARSE_ERROR = 2,
  TMR_IO_ERROR = 3,
  TMR_NUMERIC_ERROR = 4,
  /* The solver hit its iteration cap; the output handle is still valid. */
  TMR_NOT_CONVERGED = 5,
  TMR_INTERNAL_ERROR = 6
} tmr_status;

typedef enum tmr_component { TMR_COMPONENT_A = 0, TMR_COMPONENT_E = 1, TMR_COMPONENT_N = 2 } tmr_component;

typedef struct tmr_matrix tmr_matrix;
typedef struct tmr_decomposition tmr_decomposition;
typedef struct tmr_classification tmr_classification;
typedef struct tmr_synthetic tmr_synthetic;

TMR_API const char* tmr_status_string(tmr_status status);
TMR_API const char* tmr_last_error(void);
TMR_API const char* tmr_version(void);

/* ---- traffic matrices ---------------------------------------------------- */

TMR_API tmr_status tmr_matrix_load_csv(const char* path, double interval_minutes, tmr_matrix** out);
/* labels: `cols` NUL-terminated strings, or NULL for "c1".."cP". */
TMR_API tmr_status tmr_matrix_create(const double* row_major, size_t rows, size_t cols,
                                     const char* const* labels, double interval_minutes,
                                     tmr_matrix** out);
TMR_API void tmr_matrix_free(tmr_matrix* m);
TMR_API size_t tmr_matrix_rows(const tmr_matrix* m);
TMR_API size_t tmr_matrix_cols(const tmr_matrix* m);
TMR_API double tmr_matrix_interval_minutes(const tmr_matrix* m);
/* Borrowed pointer, valid while `m` lives. */
TMR_API const char* tmr_matrix_label(const tmr_matrix* m, size_t col);
TMR_API tmr_status tmr_matrix_copy_values(const tmr_matrix* m, double* row_major, size_t count);
TMR_API tmr_status tmr_matrix_save_csv(const tmr_matrix* m, const char* path);

/* Removes columns with more than `zero_fraction_limit` zeros and, when
 * `excluded_pop` is non-NULL, columns whose OD label names that PoP on
 * either side of `delimiter` (NULL selects the default arrow). */
TMR_API tmr_status tmr_matrix_filter(const tmr_matrix* m, double zero_fraction_limit,
                                     const char* excluded_pop, const char* delimiter, tmr_matrix** out);

/* ---- decomposition ------------------------------------------------------- */

typedef struct tmr_apg_options {
  double tolerance;   /* stopping threshold, default 1e-6 */
  int max_iterations; /* default 5000 */
  double lambda;      /* <= 0 selects 1/sqrt(max(t, p)) */
  double mu;          /* <= 0 selects sqrt(2 ln(tp) max(t, p)) */
} tmr_apg_options;

TMR_API void tmr_apg_options_init(tmr_apg_options* opts);

/* Returns TMR_NOT_CONVERGED with *out set when the iteration cap is hit. */
TMR_API tmr_status tmr_decompose(const tmr_matrix* x, const tmr_apg_options* opts, tmr_decomposition** out);
TMR_API void tmr_decomposition_free(tmr_decomposition* d);
TMR_API int tmr_decomposition_iterations(const tmr_decomposition* d);
TMR_API int tmr_decomposition_converged(const tmr_decomposition* d);
TMR_API int tmr_decomposition_rank_a(const tmr_decomposition* d);
TMR_API int64_t tmr_decomposition_l0_e(const tmr_decomposition* d);
TMR_API double tmr_decomposition_lambda(const tmr_decomposition* d);
TMR_API double tmr_decomposition_mu(const tmr_decomposition* d);
TMR_API double tmr_decomposition_stopping_quantity(const tmr_decomposition* d);
TMR_API double tmr_decomposition_elapsed_seconds(const tmr_decomposition* d);
TMR_API tmr_status tmr_decomposition_copy(const tmr_decomposition* d, tmr_component which, double* row_major,
                                          size_t count);
/* Writes A.csv, E.csv, N.csv and meta.json into `dir` (created if needed). */
TMR_API tmr_status tmr_decomposition_save(const tmr_decomposition* d, const char* dir);

/* ---- eigenflow classification ------------------------------------------- */

typedef struct tmr_classification_counts {
  int satisfy_d;
  int satisfy_s;
  int satisfy_n;
  int non_determinate;
  int indeterminate;
  int classified;
} tmr_classification_counts;

/* Centres the columns, runs PCA and classifies every eigenflow. */
TMR_API tmr_status tmr_classify(const tmr_matrix* x, double alpha, tmr_classification** out);
TMR_API void tmr_classification_free(tmr_classification* c);
TMR_API size_t tmr_classification_size(const tmr_classification* c);
TMR_API tmr_status tmr_classification_counts_get(const tmr_classification* c, tmr_classification_counts* out);
/* label: one of "d", "s", "n", "indeterminate", "non_determinate". */
TMR_API const char* tmr_classification_label(const tmr_classification* c, size_t index);
TMR_API tmr_status tmr_classification_unclassified_energy_rate(const tmr_classification* c, double* out);
TMR_API tmr_status tmr_classification_save_json(const tmr_classification* c, const char* path);
/* Eigenflow series and power spectra of the top `count` eigenflows as TSV. */
TMR_API tmr_status tmr_classification_save_plots(const tmr_classification* c, size_t count, const char* dir);

/* ---- synthetic data ------------------------------------------------------ */

typedef struct tmr_synth_options {
  int rows;
  int cols;
  int rank;
  double density;
  uint64_t seed;
  double interval_minutes; /* default 15 */
  double noise_sigma;      /* default 1 */
  double magnitude_min;    /* default 50 */
  double magnitude_max;    /* default 100 */
  int duration_min;        /* default 1 */
  int duration_max;        /* default 12 */
  double amplitude;        /* default 100 */
  double baseline;         /* < 0 selects 6 * noise_sigma */
  int allow_dips;
} tmr_synth_options;

TMR_API void tmr_synth_options_init(tmr_synth_options* opts);
TMR_API tmr_status tmr_synthesize(const tmr_synth_options* opts, tmr_synthetic** out);
TMR_API void tmr_synthetic_free(tmr_synthetic* s);
/* Borrowed handle, valid while `s` lives. */
TMR_API const tmr_matrix* tmr_synthetic_matrix(const tmr_synthetic* s);
/* Writes X.csv, A_true.csv, E_true.csv, N_true.csv and spec.json. */
TMR_API tmr_status tmr_synthetic_save(const tmr_synthetic* s, const char* dir);

/* ---- reports -------------------------------------------------------------- */

/* JSON: metrics plus the noise study; TSV: two-column metric/value table;
 * SCATTER_TSV: per-flow (mean_volume, noise_std) points. */
typedef enum tmr_report_format {
  TMR_REPORT_JSON = 0,
  TMR_REPORT_TSV = 1,
  TMR_REPORT_SCATTER_TSV = 2
} tmr_report_format;

/* Reads a decomposition directory and renders its report. The returned
 * string is owned by the caller and released with tmr_string_free. */
TMR_API tmr_status tmr_report_render(const char* decomposition_dir, tmr_report_format format, char** out);
/* Same, with explicit noise power-law bounds b1 m^c1 <= std <= b2 m^c2. */
TMR_API tmr_status tmr_report_render_bounds(const char* decomposition_dir, tmr_report_format format,
                                            double b1, double c1, double b2, double c2, char** out);
TMR_API void tmr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* TMRPCA_H */
