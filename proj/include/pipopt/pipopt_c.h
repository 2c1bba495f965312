/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C API for the pipopt solver library.
 *
 * All functions return PIPOPT_OK (0) on success or a nonzero error code;
 * pipopt_last_error() returns a thread-local message for the most recent
 * failure on the calling thread. Handles are opaque and must be released
 * with their matching *_free function.
 */
#ifndef PIPOPT_C_H
#define PIPOPT_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pipopt_instance pipopt_instance;
typedef struct pipopt_result pipopt_result;

enum {
  PIPOPT_OK = 0,
  PIPOPT_ERR_INVALID_ARG = 1,
  PIPOPT_ERR_IO = 2,
  PIPOPT_ERR_SOLVE = 3,
  PIPOPT_ERR_NO_VALUE = 4
};

const char* pipopt_version(void);
const char* pipopt_last_error(void);

/* ---- instances ---- */
int pipopt_instance_load(const char* path, pipopt_instance** out);
int pipopt_instance_from_json(const char* json_text, pipopt_instance** out);
int pipopt_instance_save(const pipopt_instance* inst, const char* path);
/* caller frees with pipopt_string_free */
int pipopt_instance_to_json(const pipopt_instance* inst, char** out);
int pipopt_instance_dims(const pipopt_instance* inst, int* n, int* m, int* k);
void pipopt_instance_free(pipopt_instance* inst);
void pipopt_string_free(char* s);

/* ---- generators ---- */
int pipopt_gen_stqp(int n, double rho, uint64_t seed, pipopt_instance** out);
int pipopt_gen_invqp(int m, int n, uint64_t seed, double sparsity, double perturbation,
                     pipopt_instance** out);
int pipopt_gen_qap_lift(const char* qaplib_path, double margin, pipopt_instance** out);

/* ---- solving ---- */
typedef struct pipopt_options {
  double time_limit;       /* seconds for fmip / fmip-w / oracle guard */
  double sub_time_limit;   /* seconds per pip subproblem */
  double fmip_init_budget; /* seconds for the fmip-incumbent initializer */
  int oracle_threads;
} pipopt_options;

void pipopt_options_init(pipopt_options* opts);

/* method: "pip:<p_max>", "fmip", "fmip-w", "oracle" or "stationary" */
int pipopt_solve(const pipopt_instance* inst, const char* method, const pipopt_options* opts,
                 pipopt_result** out);

const char* pipopt_result_status(const pipopt_result* res);
int pipopt_result_objective(const pipopt_result* res, double* out);
double pipopt_result_time(const pipopt_result* res);
int64_t pipopt_result_nodes(const pipopt_result* res);
double pipopt_result_gap(const pipopt_result* res);
/* trace records, one JSON object per line; empty string when absent */
const char* pipopt_result_trace(const pipopt_result* res);
/* triple sizes are the instance's n and m */
int pipopt_result_triple(const pipopt_result* res, double* x, size_t x_len, double* y,
                         size_t y_len, double* z, size_t z_len);
void pipopt_result_free(pipopt_result* res);

/* ---- benchmark harness ---- */
int pipopt_bench_run(const char* config_path, const char* out_dir);
int pipopt_report(const char* runs_csv_path, const char* out_path);

/* ---- report math ---- */
double pipopt_standardized_obj(double obj, double min_obj, double max_obj);
double pipopt_obj_imp(double init_obj, double method_obj, double min_obj);

#ifdef __cplusplus
}
#endif

#endif /* PIPOPT_C_H */
