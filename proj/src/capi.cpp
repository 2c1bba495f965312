// SPDX-License-Identifier: Apache-2.0
#include "pipopt/pipopt_c.h"

#include <cstring>
#include <fstream>
#include <optional>
#include <string>

#include "pipopt/bench.hpp"
#include "pipopt/gen.hpp"
#include "pipopt/model.hpp"

struct pipopt_instance {
  pipopt::model::LpccInstance inst;
};

struct pipopt_result {
  pipopt::bench::RunRecord record;
  std::string trace;
  pipopt::model::PointTriple triple;
  bool has_triple = false;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
int guarded(int err_code, Fn&& fn) {
  try {
    fn();
    return PIPOPT_OK;
  } catch (const std::exception& ex) {
    return fail(err_code, ex.what());
  } catch (...) {
    return fail(err_code, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* pipopt_version(void) { return "pipopt 1.0.0"; }

const char* pipopt_last_error(void) { return g_last_error.c_str(); }

int pipopt_instance_load(const char* path, pipopt_instance** out) {
  if (!path || !out) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_IO, [&] {
    auto* h = new pipopt_instance{pipopt::model::load_instance(path)};
    *out = h;
  });
}

int pipopt_instance_from_json(const char* json_text, pipopt_instance** out) {
  if (!json_text || !out) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_INVALID_ARG, [&] {
    auto* h = new pipopt_instance{pipopt::model::from_json(json_text)};
    *out = h;
  });
}

int pipopt_instance_save(const pipopt_instance* inst, const char* path) {
  if (!inst || !path) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_IO, [&] { pipopt::model::save_instance(inst->inst, path); });
}

int pipopt_instance_to_json(const pipopt_instance* inst, char** out) {
  if (!inst || !out) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_INVALID_ARG, [&] {
    std::string text = pipopt::model::to_json(inst->inst);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

int pipopt_instance_dims(const pipopt_instance* inst, int* n, int* m, int* k) {
  if (!inst) return fail(PIPOPT_ERR_INVALID_ARG, "null instance");
  if (n) *n = inst->inst.n;
  if (m) *m = inst->inst.m;
  if (k) *k = inst->inst.k;
  return PIPOPT_OK;
}

void pipopt_instance_free(pipopt_instance* inst) { delete inst; }

void pipopt_string_free(char* s) { delete[] s; }

int pipopt_gen_stqp(int n, double rho, uint64_t seed, pipopt_instance** out) {
  if (!out) return fail(PIPOPT_ERR_INVALID_ARG, "null output");
  return guarded(PIPOPT_ERR_INVALID_ARG, [&] {
    auto q = pipopt::gen::gen_stqp(n, rho, seed);
    *out = new pipopt_instance{pipopt::gen::stqp_to_lpcc(q)};
  });
}

int pipopt_gen_invqp(int m, int n, uint64_t seed, double sparsity, double perturbation,
                     pipopt_instance** out) {
  if (!out) return fail(PIPOPT_ERR_INVALID_ARG, "null output");
  return guarded(PIPOPT_ERR_INVALID_ARG, [&] {
    auto gi = pipopt::gen::gen_invqp(m, n, seed, sparsity, perturbation);
    *out = new pipopt_instance{std::move(gi.lpcc)};
  });
}

int pipopt_gen_qap_lift(const char* qaplib_path, double margin, pipopt_instance** out) {
  if (!qaplib_path || !out) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_IO, [&] {
    auto qap = pipopt::gen::load_qaplib(qaplib_path);
    *out = new pipopt_instance{pipopt::gen::qap_lift_lpcc(qap, margin)};
  });
}

void pipopt_options_init(pipopt_options* opts) {
  if (!opts) return;
  opts->time_limit = 60.0;
  opts->sub_time_limit = 10.0;
  opts->fmip_init_budget = 10.0;
  opts->oracle_threads = 1;
}

int pipopt_solve(const pipopt_instance* inst, const char* method, const pipopt_options* opts,
                 pipopt_result** out) {
  if (!inst || !method || !out) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_SOLVE, [&] {
    pipopt::bench::MethodOptions mo;
    if (opts) {
      mo.time_limit = opts->time_limit;
      mo.sub_time_limit = opts->sub_time_limit;
      mo.fmip_init_budget = opts->fmip_init_budget;
      mo.oracle_threads = opts->oracle_threads;
    }
    std::string tag(method);
    std::optional<pipopt::bench::InitOutcome> init;
    if (tag == "stationary" || tag == "fmip-w" || tag.rfind("pip", 0) == 0)
      init = pipopt::bench::initial_triple(inst->inst, mo);
    pipopt::bench::MethodResult mr =
        pipopt::bench::run_method(inst->inst, "instance", tag, mo, init ? &*init : nullptr);
    if (mr.record.status.rfind("Error", 0) == 0) throw pipopt::Error(mr.record.status);
    auto* res = new pipopt_result;
    res->record = mr.record;
    res->trace = mr.trace_jsonl;
    if (mr.triple) {
      res->triple = *mr.triple;
      res->has_triple = true;
    }
    *out = res;
  });
}

const char* pipopt_result_status(const pipopt_result* res) {
  return res ? res->record.status.c_str() : "";
}

int pipopt_result_objective(const pipopt_result* res, double* out) {
  if (!res || !out) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  if (!res->record.objective) return fail(PIPOPT_ERR_NO_VALUE, "result carries no objective");
  *out = *res->record.objective;
  return PIPOPT_OK;
}

double pipopt_result_time(const pipopt_result* res) { return res ? res->record.time_s : 0.0; }

int64_t pipopt_result_nodes(const pipopt_result* res) { return res ? res->record.nodes : 0; }

double pipopt_result_gap(const pipopt_result* res) { return res ? res->record.gap : 0.0; }

const char* pipopt_result_trace(const pipopt_result* res) {
  return res ? res->trace.c_str() : "";
}

int pipopt_result_triple(const pipopt_result* res, double* x, size_t x_len, double* y,
                         size_t y_len, double* z, size_t z_len) {
  if (!res) return fail(PIPOPT_ERR_INVALID_ARG, "null result");
  if (!res->has_triple) return fail(PIPOPT_ERR_NO_VALUE, "result carries no triple");
  if (x_len < res->triple.x.size() || y_len < res->triple.y.size() ||
      z_len < res->triple.z.size())
    return fail(PIPOPT_ERR_INVALID_ARG, "output buffers too small");
  if (x) std::memcpy(x, res->triple.x.data(), res->triple.x.size() * sizeof(double));
  if (y) std::memcpy(y, res->triple.y.data(), res->triple.y.size() * sizeof(double));
  if (z) std::memcpy(z, res->triple.z.data(), res->triple.z.size() * sizeof(double));
  return PIPOPT_OK;
}

void pipopt_result_free(pipopt_result* res) { delete res; }

int pipopt_bench_run(const char* config_path, const char* out_dir) {
  if (!config_path || !out_dir) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_SOLVE, [&] {
    pipopt::bench::BenchConfig cfg = pipopt::bench::load_config(config_path);
    pipopt::bench::run_bench(cfg, out_dir);
  });
}

int pipopt_report(const char* runs_csv_path, const char* out_path) {
  if (!runs_csv_path || !out_path) return fail(PIPOPT_ERR_INVALID_ARG, "null argument");
  return guarded(PIPOPT_ERR_IO, [&] {
    std::ifstream in(runs_csv_path);
    if (!in) throw pipopt::Error(std::string("cannot open ") + runs_csv_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto records = pipopt::bench::records_from_csv(text);
    std::ofstream out(out_path);
    if (!out) throw pipopt::Error(std::string("cannot open ") + out_path);
    out << pipopt::bench::summary_report(records);
  });
}

double pipopt_standardized_obj(double obj, double min_obj, double max_obj) {
  return pipopt::bench::standardized_obj(obj, min_obj, max_obj);
}

double pipopt_obj_imp(double init_obj, double method_obj, double min_obj) {
  return pipopt::bench::obj_imp(init_obj, method_obj, min_obj);
}

}  // extern "C"
