// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end; talks to the solver exclusively through the C API.
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pipopt/pipopt_c.h"

namespace {

int die(const std::string& what) {
  std::fprintf(stderr, "error: %s: %s\n", what.c_str(), pipopt_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive integer programming toolkit for LPCCs and indefinite QPs"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "Generate an instance and write it as JSON");
  std::string family = "stqp", out_path = "instance.json", qap_path;
  int g_n = 10, g_m = 12;
  double rho = 0.5, sparsity = 0.5, perturbation = 0.5, margin = 1.0;
  std::uint64_t seed = 1;
  gen->add_option("--family", family, "stqp | invqp | qap")->capture_default_str();
  gen->add_option("--n", g_n, "problem size")->capture_default_str();
  gen->add_option("--m", g_m, "complementarity pairs (invqp)")->capture_default_str();
  gen->add_option("--rho", rho, "stqp density")->capture_default_str();
  gen->add_option("--sparsity", sparsity, "invqp sparsity")->capture_default_str();
  gen->add_option("--perturbation", perturbation, "invqp target perturbation")
      ->capture_default_str();
  gen->add_option("--margin", margin, "qap diagonal shift margin")->capture_default_str();
  gen->add_option("--qaplib", qap_path, "QAPLIB file (family qap)");
  gen->add_option("--seed", seed, "random seed")->capture_default_str();
  gen->add_option("-o,--out", out_path, "output path")->capture_default_str();

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Solve an instance with one method");
  std::string inst_path, method = "pip:0.9", trace_path;
  pipopt_options opts;
  pipopt_options_init(&opts);
  solve->add_option("--instance", inst_path, "instance JSON")->required();
  solve->add_option("--method", method, "pip:<p_max> | fmip | fmip-w | oracle | stationary")
      ->capture_default_str();
  solve->add_option("--time-limit", opts.time_limit, "seconds")->capture_default_str();
  solve->add_option("--sub-time-limit", opts.sub_time_limit, "seconds per pip subproblem")
      ->capture_default_str();
  solve->add_option("--init-budget", opts.fmip_init_budget, "initializer budget (s)")
      ->capture_default_str();
  solve->add_option("--oracle-threads", opts.oracle_threads, "threads for the oracle")
      ->capture_default_str();
  solve->add_option("--trace", trace_path, "write pip trace records here");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "Run a configured sweep");
  std::string config_path, out_dir = "bench_out";
  bench->add_option("--config", config_path, "bench config file")->required();
  bench->add_option("--out", out_dir, "output directory")->capture_default_str();

  // ---- report ----
  auto* report = app.add_subcommand("report", "Regenerate a summary from a runs CSV");
  std::string csv_path, report_path = "summary.txt";
  report->add_option("--csv", csv_path, "runs CSV")->required();
  report->add_option("--out", report_path, "summary output path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    pipopt_instance* inst = nullptr;
    int rc;
    if (family == "stqp")
      rc = pipopt_gen_stqp(g_n, rho, seed, &inst);
    else if (family == "invqp")
      rc = pipopt_gen_invqp(g_m, g_n, seed, sparsity, perturbation, &inst);
    else if (family == "qap")
      rc = pipopt_gen_qap_lift(qap_path.c_str(), margin, &inst);
    else {
      std::fprintf(stderr, "error: unknown family '%s'\n", family.c_str());
      return 1;
    }
    if (rc != PIPOPT_OK) return die("generate");
    rc = pipopt_instance_save(inst, out_path.c_str());
    if (rc != PIPOPT_OK) {
      pipopt_instance_free(inst);
      return die("save");
    }
    int n = 0, m = 0, k = 0;
    pipopt_instance_dims(inst, &n, &m, &k);
    std::printf("wrote %s (n=%d, m=%d, k=%d)\n", out_path.c_str(), n, m, k);
    pipopt_instance_free(inst);
    return 0;
  }

  if (solve->parsed()) {
    pipopt_instance* inst = nullptr;
    if (pipopt_instance_load(inst_path.c_str(), &inst) != PIPOPT_OK) return die("load");
    pipopt_result* res = nullptr;
    int rc = pipopt_solve(inst, method.c_str(), &opts, &res);
    if (rc != PIPOPT_OK) {
      pipopt_instance_free(inst);
      return die("solve");
    }
    double obj = 0.0;
    bool has_obj = pipopt_result_objective(res, &obj) == PIPOPT_OK;
    std::printf("method=%s status=%s", method.c_str(), pipopt_result_status(res));
    if (has_obj) std::printf(" objective=%.12g", obj);
    std::printf(" time_s=%.3f nodes=%lld gap=%.3g\n", pipopt_result_time(res),
                static_cast<long long>(pipopt_result_nodes(res)), pipopt_result_gap(res));
    if (!trace_path.empty()) {
      std::ofstream tf(trace_path);
      tf << pipopt_result_trace(res);
    }
    pipopt_result_free(res);
    pipopt_instance_free(inst);
    return 0;
  }

  if (bench->parsed()) {
    if (pipopt_bench_run(config_path.c_str(), out_dir.c_str()) != PIPOPT_OK) return die("bench");
    std::printf("bench complete; results under %s\n", out_dir.c_str());
    return 0;
  }

  if (report->parsed()) {
    if (pipopt_report(csv_path.c_str(), report_path.c_str()) != PIPOPT_OK) return die("report");
    std::printf("wrote %s\n", report_path.c_str());
    return 0;
  }
  return 0;
}
