/* Copyright 2026 The fkcrit Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to fkcrit. Objects are opaque handles; every call returns an
 * fkc_status and the message of the last failure on the calling thread is
 * available from fkc_last_error(). Output arrays are caller-allocated with
 * one entry per state unless stated otherwise; NULL skips an optional output.
 */
#ifndef FKCRIT_H_
#define FKCRIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FKC_BUILDING_LIBRARY)
#define FKC_API __attribute__((visibility("default")))
#else
#define FKC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fkc_status {
  FKC_OK = 0,
  FKC_INVALID_ARGUMENT = 1,
  FKC_NON_SYMMETRIC_INPUT = 2,
  FKC_NON_POSITIVE_MASS = 3,
  FKC_MARKED_POINT_OFF_GRID = 4,
  FKC_UNSUPPORTED_DIMENSION = 5,
  FKC_NEGATIVE_DENSITY = 6,
  FKC_SINGULAR_RESOLVENT = 7,
  FKC_RECURRENT_FORM = 8,
  FKC_EMPTY_NEGATIVE_PART = 9,
  FKC_SINGULAR_REDUCTION = 10,
  FKC_RECURRENT_POSITIVE_PART = 11,
  FKC_CONSERVATIVE_CHAIN = 12,
  FKC_BANDWIDTH_TOO_SMALL = 13,
  FKC_LP_SOLVER_FAILURE = 14,
  FKC_PARSE_ERROR = 15,
  FKC_NUMERICAL_ERROR = 16,
  FKC_IO_ERROR = 17,
  FKC_INTERNAL_ERROR = 99
} fkc_status;

typedef struct fkc_form fkc_form;
typedef struct fkc_measure fkc_measure;

FKC_API const char* fkc_version(void);
FKC_API const char* fkc_status_name(fkc_status status);
/* Message of the last failed call on this thread ("" if none). */
FKC_API const char* fkc_last_error(void);

/* Weighted graph: edge i joins from[i] and to[i] with conductance weight[i].
 * killing may be NULL (no killing). */
FKC_API fkc_status fkc_form_create(size_t n, size_t n_edges, const size_t* from,
                                   const size_t* to, const double* weight,
                                   const double* killing, const double* mass,
                                   fkc_form** out);
/* 1D grid for (1/2) d^2/dx^2 on [left, right]; ends free (0) or absorbing (1).
 * The step is snapped down so every marked point is a node. */
FKC_API fkc_status fkc_grid_form_create(double left, double right, double h,
                                        int left_absorbing, int right_absorbing,
                                        const double* marked, size_t n_marked,
                                        fkc_form** out);
/* Radial grid for (1/2) Laplacian on R^d, nodes r = h, 2h, ..., free ends. */
FKC_API fkc_status fkc_radial_form_create(int dimension, double r_max, double h,
                                          fkc_form** out);
FKC_API void fkc_form_destroy(fkc_form* form);
FKC_API size_t fkc_form_size(const fkc_form* form);
/* Grid forms only. */
FKC_API fkc_status fkc_form_step(const fkc_form* form, double* step);
FKC_API fkc_status fkc_form_node_index(const fkc_form* form, double x, size_t* index);

/* mu = plus - minus, given per state; either array may be NULL (zero). */
FKC_API fkc_status fkc_measure_create(const fkc_form* form, const double* plus,
                                      const double* minus, fkc_measure** out);
/* Adds weight at the grid node `location` to mu+ (sign > 0) or mu- (sign < 0). */
FKC_API fkc_status fkc_measure_add_atom(fkc_measure* measure, const fkc_form* form,
                                        double location, double weight, int sign);
FKC_API void fkc_measure_destroy(fkc_measure* measure);

/* lambda(mu) and its minimizer normalized by sum u^2 mu- = 1. */
FKC_API fkc_status fkc_lambda_mu(const fkc_form* form, const fkc_measure* mu,
                                 double* lambda, double* minimizer);
/* Bottom of the spectrum of E^mu against m, minimizer normalized in L^2(m). */
FKC_API fkc_status fkc_lambda0(const fkc_form* form, const fkc_measure* mu,
                               double* lambda0, double* minimizer);
/* Gauge E^{mu+}_x[exp(A^{mu-}_zeta)]; `gauge` is written only if gaugeable. */
FKC_API fkc_status fkc_gauge(const fkc_form* form, const fkc_measure* mu,
                             double* spectral_radius, int* gaugeable, double* gauge);
FKC_API fkc_status fkc_assumption_a(const fkc_form* form, const fkc_measure* mu,
                                    int* holds);
/* Maximum principle. `witness` (may be NULL) is written when *holds == 0. */
FKC_API fkc_status fkc_check_mp(const fkc_form* form, const fkc_measure* mu, int* holds,
                                double* lp_optimum, double* witness);
FKC_API fkc_status fkc_check_liouville(const fkc_form* form, const fkc_measure* mu,
                                       int* holds, double* scaled_singular_value,
                                       double* witness);
/* out = p^mu_t f. */
FKC_API fkc_status fkc_fk_apply(const fkc_form* form, const fkc_measure* mu, double t,
                                const double* f, double* out);

/* Runs a spec (text) and writes CSV files to out_dir. seed_override is used
 * when has_seed is nonzero. *exit_code receives 0, 2 or 3; on 2 or 3 the
 * reason is available from fkc_last_error(). */
FKC_API fkc_status fkc_experiment_run(const char* spec_text, const char* out_dir,
                                      unsigned threads, int has_seed,
                                      uint64_t seed_override, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* FKCRIT_H_ */
