/* SPDX-License-Identifier: Apache-2.0 */
#ifndef KGWAVE_KGWAVE_H
#define KGWAVE_KGWAVE_H

#include <stddef.h>

#if defined(KGW_BUILDING_LIBRARY)
#define KGW_API __attribute__((visibility("default")))
#else
#define KGW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kgw_status {
  KGW_OK = 0,
  KGW_ERR_CONFIG = 2,
  KGW_ERR_CONVERGENCE = 3,
  KGW_ERR_IO = 4,
  KGW_ERR_INVALID_ARGUMENT = 5,
  KGW_ERR_DOMAIN = 6,
  KGW_ERR_INTERNAL = 7
} kgw_status;

/* Solved boundary integral problem (opaque). */
typedef struct kgw_solution kgw_solution;

typedef struct kgw_run_options {
  const char* config_path; /* NULL: command default where one exists */
  const char* out_dir;     /* NULL: current directory */
  int serial;              /* nonzero: single thread, bit-reproducible */
  double tol;              /* > 0 overrides the GMRES tolerance */
  double tau;              /* > 0 overrides the buffer scale */
  int ncmax;               /* > 0 sets an n_c ladder 16, 32, ..., ncmax */
  const char* grid;        /* "x0,x1,nx,y0,y1,ny" or NULL */
  const char* b_grid;      /* "b0,b1,n" or NULL */
  int quiet;
} kgw_run_options;

KGW_API const char* kgw_version(void);

/* Message of the last failed call on this thread ("" if none). */
KGW_API const char* kgw_last_error(void);

/* 0 restores the default (KGW_NUM_THREADS, then OMP_NUM_THREADS). */
KGW_API kgw_status kgw_set_num_threads(int n);
KGW_API int kgw_get_num_threads(void);

KGW_API void kgw_run_options_init(kgw_run_options* opt);

/* Command drivers; write their artifacts below opt->out_dir.
   KGW_ERR_CONVERGENCE is returned when a solve did not reach tolerance. */
KGW_API kgw_status kgw_cmd_solve(const kgw_run_options* opt);
KGW_API kgw_status kgw_cmd_grid(const kgw_run_options* opt);
KGW_API kgw_status kgw_cmd_converge(const kgw_run_options* opt);
KGW_API kgw_status kgw_cmd_scatter(const kgw_run_options* opt);
KGW_API kgw_status kgw_cmd_selftest(const kgw_run_options* opt);

/* Solve from a JSON config text. */
KGW_API kgw_status kgw_solve_json(const char* json, kgw_solution** out);
KGW_API void kgw_solution_free(kgw_solution* sol);

KGW_API kgw_status kgw_solution_info(const kgw_solution* sol, int* n_core, int* n_over, int* iterations,
                                     double* true_residual, int* converged);

/* Field at n points xy[2i], xy[2i+1]; u receives interleaved (re, im). */
KGW_API kgw_status kgw_solution_eval(const kgw_solution* sol, size_t n, const double* xy, double* u);

/* Buffered node parameters (n_over) and densities (2 n_over, interleaved); NULL arrays are skipped. */
KGW_API kgw_status kgw_solution_densities(const kgw_solution* sol, double* t, double* rho, double* mu);

/* Flat-interface single-mass symbol a(xi) and its inverse (interleaved re, im). */
KGW_API kgw_status kgw_symbol_a(double xi, double m, double E, double* a, double* a_inv);

#ifdef __cplusplus
}
#endif

#endif
