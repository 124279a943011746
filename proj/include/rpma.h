/*
 * C interface to the regularized projection matrix approximation library.
 *
 * All functions return a status code (RPMA_OK on success); output parameters
 * are written only on success. Objects are created behind opaque handles and
 * released with the matching *_free function. rpma_last_error() returns a
 * thread-local description of the most recent failure.
 */
#ifndef RPMA_H
#define RPMA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define RPMA_OK 0
#define RPMA_ERROR_INVALID_ARGUMENT 1
#define RPMA_ERROR_DATA 2
#define RPMA_ERROR_NUMERICAL 3
#define RPMA_ERROR_INTERNAL 4

typedef struct rpma_matrix rpma_matrix;
typedef struct rpma_labels rpma_labels;
typedef struct rpma_solution rpma_solution;

const char* rpma_last_error(void);

/* ------------------------------------------------------------------ */
/* Dense matrices (row-major interchange format)                       */

int rpma_matrix_create(int64_t rows, int64_t cols, const double* row_major,
                       rpma_matrix** out);
int rpma_matrix_rows(const rpma_matrix* m, int64_t* out);
int rpma_matrix_cols(const rpma_matrix* m, int64_t* out);
int rpma_matrix_get(const rpma_matrix* m, int64_t row, int64_t col, double* out);
int rpma_matrix_copy_data(const rpma_matrix* m, double* out_row_major);
int rpma_matrix_load_csv(const char* path, rpma_matrix** out);
int rpma_matrix_save_csv(const rpma_matrix* m, const char* path);
/* ||M - M'||_F, for warning on nominally symmetric inputs. */
int rpma_matrix_asymmetry(const rpma_matrix* m, double* out);
void rpma_matrix_free(rpma_matrix* m);

/* ------------------------------------------------------------------ */
/* Cluster labels (integers, 1..K by convention)                       */

int rpma_labels_create(int64_t n, const int32_t* values, rpma_labels** out);
int rpma_labels_size(const rpma_labels* l, int64_t* out);
int rpma_labels_copy_data(const rpma_labels* l, int32_t* out);
int rpma_labels_load_csv(const char* path, rpma_labels** out);
int rpma_labels_save_csv(const rpma_labels* l, const char* path);
void rpma_labels_free(rpma_labels* l);

/* ------------------------------------------------------------------ */
/* Data generation                                                     */

/* Stochastic block model affinity (0/1, symmetric, unit diagonal) plus the
 * ground-truth labels. sizes may be NULL for balanced communities. */
int rpma_sbm_generate(int64_t n, int32_t k, double p_in, double p_out,
                      const int64_t* sizes, uint64_t seed,
                      rpma_matrix** affinity_out, rpma_labels** labels_out);

/* Gaussian-kernel affinity from feature rows; the bandwidth is the mean
 * squared pairwise distance. */
int rpma_gaussian_affinity(const rpma_matrix* features, rpma_matrix** affinity_out);

/* ------------------------------------------------------------------ */
/* Solvers                                                             */

typedef enum {
  RPMA_METHOD_CURVILINEAR_U = 0,
  RPMA_METHOD_PERTURBED_U = 1,
  RPMA_METHOD_CURVILINEAR_X = 2,
  RPMA_METHOD_ADMM = 3,
  RPMA_METHOD_BEST_OF = 4,
} rpma_method;

typedef enum {
  RPMA_PENALTY_BOUNDED = 0,
  RPMA_PENALTY_NONNEG = 1,
  RPMA_PENALTY_HUBER = 2,
} rpma_penalty;

typedef struct rpma_solve_options {
  int32_t method;   /* rpma_method */
  int32_t penalty;  /* rpma_penalty */
  double alpha;     /* bounded penalty lower bound */
  double beta;      /* bounded penalty upper bound (HUGE_VAL for none) */
  double delta;     /* huber threshold */
  double lambda;    /* penalty weight */
  double rho1;
  double rho2;
  double tau0;
  double epsilon;
  int64_t max_iters;
  int32_t max_halvings;
  double perturb_c;
  double rho_admm;  /* <= 0 selects the default 3*lambda*lipschitz */
  uint64_t seed;
} rpma_solve_options;

/* Fills every field with the library defaults (nonneg penalty, ADMM). */
void rpma_solve_options_init(rpma_solve_options* opts);

int rpma_solve(const rpma_matrix* affinity, int32_t k,
               const rpma_solve_options* opts, rpma_solution** out);

int rpma_solution_projector(const rpma_solution* s, rpma_matrix** out);
int rpma_solution_basis(const rpma_solution* s, rpma_matrix** out);
int rpma_solution_objective(const rpma_solution* s, double* out);
int rpma_solution_kkt_residual(const rpma_solution* s, double* out);
int rpma_solution_iterations(const rpma_solution* s, int64_t* out);
int rpma_solution_converged(const rpma_solution* s, int32_t* out);
int rpma_solution_weak_step(const rpma_solution* s, int32_t* out);
int rpma_solution_degenerate_gap(const rpma_solution* s, int32_t* out);
int rpma_solution_theory_rho(const rpma_solution* s, int32_t* out);
int rpma_solution_rho_used(const rpma_solution* s, double* out);
/* Name of the method that produced the result; the pointer stays valid for
 * the lifetime of the solution handle. */
int rpma_solution_method(const rpma_solution* s, const char** out);
int rpma_solution_write_trace_json(const rpma_solution* s, const char* path);
int rpma_solution_write_trace_csv(const rpma_solution* s, const char* path);
void rpma_solution_free(rpma_solution* s);

/* ------------------------------------------------------------------ */
/* Clustering and evaluation                                           */

/* k-means on the rows of `points`, best of `restarts` seeded runs. */
int rpma_kmeans_rows(const rpma_matrix* points, int32_t k, uint64_t seed,
                     int32_t restarts, rpma_labels** out);

int rpma_accuracy(const rpma_labels* pred, const rpma_labels* truth, double* out);
int rpma_nmi(const rpma_labels* pred, const rpma_labels* truth, double* out);
int rpma_frobenius_to_ideal(const rpma_matrix* projector, const rpma_labels* truth,
                            double* out);

#ifdef __cplusplus
}
#endif

#endif /* RPMA_H */
