/*
 * C interface to the lslrr library: locality and structure regularized
 * low-rank representation for pixel classification.
 *
 * Every object is an opaque handle created by a lslrr_*_create / _load /
 * _generate call and released with the matching _free. Functions that can
 * fail return lslrr_status; on failure lslrr_last_error() describes the
 * problem for the calling thread until the next failing call.
 */
#ifndef LSLRR_LSLRR_H
#define LSLRR_LSLRR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LSLRR_BUILDING_LIBRARY)
#define LSLRR_API __declspec(dllexport)
#else
#define LSLRR_API __declspec(dllimport)
#endif
#else
#define LSLRR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lslrr_status {
  LSLRR_OK = 0,
  LSLRR_ERR_ARGUMENT = 1,    /* null handle, bad buffer size */
  LSLRR_ERR_INVALID_INPUT = 2,
  LSLRR_ERR_CONFIG = 3,
  LSLRR_ERR_SPLIT = 4,
  LSLRR_ERR_LOAD = 5,        /* malformed or unreadable input file */
  LSLRR_ERR_IO = 6,          /* cannot write output */
  LSLRR_ERR_DIVERGENCE = 7,
  LSLRR_ERR_INTERNAL = 8
} lslrr_status;

typedef struct lslrr_matrix lslrr_matrix;
typedef struct lslrr_dataset lslrr_dataset;
typedef struct lslrr_split lslrr_split;
typedef struct lslrr_solution lslrr_solution;
typedef struct lslrr_report lslrr_report;
typedef struct lslrr_run lslrr_run;

/* Solver hyperparameters. sigma/theta are only used when the matching
 * auto_* flag is zero; otherwise they are derived from the data. */
typedef struct lslrr_config {
  double lambda;
  double alpha;
  double beta;
  double m;
  double sigma;
  double theta;
  int auto_sigma;
  int auto_theta;
  double w;
  double mu0;
  double rho;
  double mu_max;
  double epsilon;
  int max_iter;
  int dictionary_learning;
  int column_sum_constraint;
} lslrr_config;

typedef struct lslrr_synthetic_spec {
  int band_count;
  int classes;
  int subspace_dim;
  int pixels_per_class;
  int grid_side; /* 0 = smallest square that fits */
  double noise_sigma;
  double corrupt_fraction;
  uint64_t seed;
} lslrr_synthetic_spec;

typedef struct lslrr_residuals {
  int iteration;
  double mu;
  double reconstruction;
  double z_minus_j;
  double h_minus_z;
  double dictionary_change;
  double column_sum;
} lslrr_residuals;

LSLRR_API const char* lslrr_version(void);
LSLRR_API const char* lslrr_last_error(void);
LSLRR_API const char* lslrr_status_name(lslrr_status status);

LSLRR_API void lslrr_config_default(lslrr_config* cfg);
LSLRR_API lslrr_status lslrr_config_validate(const lslrr_config* cfg);
LSLRR_API void lslrr_synthetic_spec_default(lslrr_synthetic_spec* spec);

/* Matrices: row-major copies in and out. */
LSLRR_API lslrr_status lslrr_matrix_create(size_t rows, size_t cols, const double* row_major,
                                           lslrr_matrix** out);
LSLRR_API lslrr_status lslrr_matrix_load(const char* path, lslrr_matrix** out);
LSLRR_API lslrr_status lslrr_matrix_save(const lslrr_matrix* m, const char* path);
LSLRR_API size_t lslrr_matrix_rows(const lslrr_matrix* m);
LSLRR_API size_t lslrr_matrix_cols(const lslrr_matrix* m);
LSLRR_API lslrr_status lslrr_matrix_copy_out(const lslrr_matrix* m, double* row_major,
                                             size_t capacity);
LSLRR_API void lslrr_matrix_free(lslrr_matrix* m);

/* Datasets. labels may be NULL / path may be NULL for unlabeled data. */
LSLRR_API lslrr_status lslrr_dataset_create(size_t bands, size_t pixels,
                                            const double* spectra_row_major,
                                            const double* coords_row_major, const int* labels,
                                            lslrr_dataset** out);
LSLRR_API lslrr_status lslrr_dataset_load(const char* spectra_path, const char* coords_path,
                                          const char* labels_path, lslrr_dataset** out);
LSLRR_API lslrr_status lslrr_dataset_save(const lslrr_dataset* ds, const char* spectra_path,
                                          const char* coords_path, const char* labels_path);
/* normalized != 0 returns the min-max scaled dataset. */
LSLRR_API lslrr_status lslrr_dataset_generate(const lslrr_synthetic_spec* spec, int normalized,
                                              lslrr_dataset** out);
LSLRR_API lslrr_status lslrr_dataset_normalize(const lslrr_dataset* ds, lslrr_dataset** out);
LSLRR_API size_t lslrr_dataset_bands(const lslrr_dataset* ds);
LSLRR_API size_t lslrr_dataset_pixels(const lslrr_dataset* ds);
LSLRR_API int lslrr_dataset_classes(const lslrr_dataset* ds);
LSLRR_API lslrr_status lslrr_dataset_spectra(const lslrr_dataset* ds, lslrr_matrix** out);
LSLRR_API lslrr_status lslrr_dataset_coords(const lslrr_dataset* ds, lslrr_matrix** out);
LSLRR_API void lslrr_dataset_free(lslrr_dataset* ds);

/* Stratified train/test splits. */
LSLRR_API lslrr_status lslrr_split_create(const lslrr_dataset* ds, double train_fraction,
                                          uint64_t seed, lslrr_split** out);
LSLRR_API lslrr_status lslrr_split_load(const char* path, lslrr_split** out);
LSLRR_API lslrr_status lslrr_split_save(const lslrr_split* split, const char* path);
LSLRR_API int lslrr_split_classes(const lslrr_split* split);
LSLRR_API size_t lslrr_split_train_count(const lslrr_split* split);
LSLRR_API size_t lslrr_split_test_count(const lslrr_split* split);
LSLRR_API lslrr_status lslrr_split_class_sizes(const lslrr_split* split, size_t* out,
                                               size_t capacity);
LSLRR_API lslrr_status lslrr_split_test_labels(const lslrr_split* split, int* out,
                                               size_t capacity);
LSLRR_API void lslrr_split_free(lslrr_split* split);

/* Locality matrix M (atoms x samples) and structure matrix Q for inspection. */
LSLRR_API lslrr_status lslrr_build_matrices(const lslrr_dataset* ds, const lslrr_split* split,
                                            const lslrr_config* cfg, lslrr_matrix** locality,
                                            lslrr_matrix** structure);

/* Full solve. The dataset is normalized internally. */
LSLRR_API lslrr_status lslrr_solve(const lslrr_dataset* ds, const lslrr_split* split,
                                   const lslrr_config* cfg, lslrr_solution** out);
LSLRR_API int lslrr_solution_converged(const lslrr_solution* sol);
LSLRR_API int lslrr_solution_iterations(const lslrr_solution* sol);
/* Representation (atoms x samples, training columns first), noise, dictionary. */
LSLRR_API lslrr_status lslrr_solution_z(const lslrr_solution* sol, lslrr_matrix** out);
LSLRR_API lslrr_status lslrr_solution_e(const lslrr_solution* sol, lslrr_matrix** out);
LSLRR_API lslrr_status lslrr_solution_d(const lslrr_solution* sol, lslrr_matrix** out);
LSLRR_API size_t lslrr_solution_trace_length(const lslrr_solution* sol);
LSLRR_API lslrr_status lslrr_solution_trace_at(const lslrr_solution* sol, size_t index,
                                               lslrr_residuals* out);
LSLRR_API lslrr_status lslrr_solution_trace_save(const lslrr_solution* sol, const char* path);
LSLRR_API void lslrr_solution_free(lslrr_solution* sol);

/* Labels from a representation. z may hold all samples or only the test
 * columns; the rightmost `count` columns are classified. */
LSLRR_API lslrr_status lslrr_classify(const lslrr_matrix* z, const size_t* class_sizes,
                                      size_t class_count, int* labels_out, size_t count);
LSLRR_API lslrr_status lslrr_labels_load(const char* path, int** labels, size_t* count);
LSLRR_API lslrr_status lslrr_labels_save(const char* path, const int* labels, size_t count);
LSLRR_API void lslrr_labels_free(int* labels);

/* Metrics. Truth label 0 is skipped. class_count <= 0 infers it. */
LSLRR_API lslrr_status lslrr_evaluate(const int* predicted, const int* truth, size_t count,
                                      int class_count, lslrr_report** out);
LSLRR_API double lslrr_report_overall_accuracy(const lslrr_report* r);
LSLRR_API double lslrr_report_average_accuracy(const lslrr_report* r);
LSLRR_API double lslrr_report_kappa(const lslrr_report* r);
LSLRR_API int lslrr_report_classes(const lslrr_report* r);
LSLRR_API double lslrr_report_class_accuracy(const lslrr_report* r, int class_id);
LSLRR_API long lslrr_report_confusion(const lslrr_report* r, int true_class, int predicted_class);
LSLRR_API void lslrr_report_free(lslrr_report* r);

/* Classification map as binary PPM, labels row-major rows x cols. */
LSLRR_API lslrr_status lslrr_write_classification_map(const int* labels, size_t rows,
                                                      size_t cols, const char* path);

/* End-to-end runs. A run is described either by a synthetic spec or by
 * dataset paths, plus a split and a config; a manifest written by
 * lslrr_run_save_manifest replays the run via lslrr_run_from_manifest. */
LSLRR_API lslrr_status lslrr_run_synthetic(const lslrr_synthetic_spec* spec,
                                           double train_fraction, uint64_t split_seed,
                                           const lslrr_config* cfg, lslrr_run** out);
LSLRR_API lslrr_status lslrr_run_files(const char* spectra_path, const char* coords_path,
                                       const char* labels_path, double train_fraction,
                                       uint64_t split_seed, const lslrr_config* cfg,
                                       lslrr_run** out);
/* Reruns a manifest; fails with LSLRR_ERR_LOAD if the data digests differ. */
LSLRR_API lslrr_status lslrr_run_from_manifest(const char* manifest_path, lslrr_run** out);
LSLRR_API lslrr_status lslrr_run_save_manifest(const lslrr_run* run, const char* path);
LSLRR_API lslrr_status lslrr_run_save_map(const lslrr_run* run, const char* path);
LSLRR_API const lslrr_report* lslrr_run_report(const lslrr_run* run);
LSLRR_API const lslrr_solution* lslrr_run_solution(const lslrr_run* run);
LSLRR_API void lslrr_run_free(lslrr_run* run);

#ifdef __cplusplus
}
#endif

#endif /* LSLRR_LSLRR_H */
