// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pipopt/model.hpp"
#include "pipopt/pip.hpp"

namespace pipopt::bench {

// standardized objective: best (smallest) maps to 0, worst to 100
double standardized_obj(double obj, double min_obj, double max_obj);

// reduced-optimality-gap proxy against the initializer's objective
double obj_imp(double init_obj, double method_obj, double min_obj);

struct RunRecord {
  std::string instance;
  std::string method;
  std::string status;
  std::optional<double> objective;
  double time_s = 0.0;
  std::int64_t nodes = 0;
  double gap = 0.0;
};

// flat key-value / array configuration
struct BenchConfig {
  std::string family = "stqp";  // stqp | invqp | qap | files
  std::vector<int> sizes;       // stqp n's / invqp n's
  std::vector<int> pair_counts; // invqp m's
  std::vector<double> rho{0.5};
  std::vector<std::uint64_t> seeds{1};
  double sparsity = 0.5;
  double perturbation = 0.5;
  double margin = 1.0;
  std::vector<std::string> qap_files;
  std::vector<std::string> instance_files;
  std::vector<std::string> methods;
  double time_limit = 60.0;
  double sub_time_limit = 10.0;
  double fmip_init_budget = 10.0;
  std::string out_prefix = "bench";
  int oracle_threads = 1;
};

BenchConfig parse_config(const std::string& text);
BenchConfig load_config(const std::string& path);

struct MethodOptions {
  double time_limit = 60.0;
  double sub_time_limit = 10.0;
  double fmip_init_budget = 10.0;
  int oracle_threads = 1;
};

// feasible initializer per family: Frank-Wolfe stationary point snapped to
// its piece for QP-derived instances, FMIP incumbent otherwise
struct InitOutcome {
  model::PointTriple triple;
  double objective = 0.0;
  double time_s = 0.0;
  std::string source;  // "stationary" or "fmip-incumbent"
};
InitOutcome initial_triple(const model::LpccInstance& inst, const MethodOptions& opts);

struct MethodResult {
  RunRecord record;
  std::string trace_jsonl;  // pip methods only
  std::optional<model::PointTriple> triple;
};

// method tags: pip:<p_max>, fmip, fmip-w, oracle, stationary
MethodResult run_method(const model::LpccInstance& inst, const std::string& instance_name,
                        const std::string& method, const MethodOptions& opts,
                        const InitOutcome* init);

// full sweep: writes <prefix>_runs.csv, <prefix>_summary.txt and per-cell
// trace/event files into out_dir; returns the records
std::vector<RunRecord> run_bench(const BenchConfig& cfg, const std::string& out_dir);

std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& text);
std::string summary_report(const std::vector<RunRecord>& records);

}  // namespace pipopt::bench
