// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pipopt/bb.hpp"
#include "pipopt/model.hpp"

namespace pipopt::pip {

struct PipConfig {
  double p_max = 0.9;        // in (0,1); terminate when p < 1 - p_max
  int r_max = 3;             // iterations p may stay unchanged
  double p0 = 0.8;           // initial fixing proportion, in (1 - p_max, 1)
  double alpha = 0.1;        // decrement, in (0,1)
  double sub_time_limit = 0; // <= 0 picks 60 s (< 900 pairs) or 600 s
  bool certify_final = false;
  double pos_tol = kPositiveTol;
  double feas_tol = 1e-7;
  bb::BbConfig engine;

  void validate() const;
  double effective_sub_time_limit(int pairs) const;
};

struct PipIteration {
  int iter = 0;
  double p = 0.0;
  int r = 0;
  int n_y_plus = 0, n_z_plus = 0, n_c = 0;
  bb::SolveStatus sub_status = bb::SolveStatus::optimal;
  double objective = 0.0;
  double time_s = 0.0;
};

struct PipTrace {
  std::vector<PipIteration> iterations;
  std::string final_status;
  double total_time = 0.0;
};

enum class Certificate { certified, not_certified, indeterminate };

struct PipResult {
  model::PointTriple triple;
  double objective = 0.0;
  PipTrace trace;
  std::optional<Certificate> certified_local_min;  // present when certify_final
};

enum class InitKind { given_triple, incumbent_from_fmip, infeasible_seed };

struct InitSpec {
  InitKind kind = InitKind::given_triple;
  model::PointTriple seed;
  double fmip_budget = 10.0;  // seconds, incumbent_from_fmip only
};

struct InitResult {
  model::PointTriple triple;
  bool accepted = false;  // false: usable only to build the first partition
};

InitResult initialize(const model::LpccInstance& inst, const InitSpec& spec,
                      const PipConfig& cfg = {});

PipResult run_pip(const model::LpccInstance& inst, const InitSpec& init, const PipConfig& cfg);
PipResult run_pip(const model::LpccInstance& inst, const model::PointTriple& start,
                  const PipConfig& cfg);

// Partial MILP with maximal fixed sets, solved to proven optimality.
Certificate certify_local_min(const model::LpccInstance& inst, const model::PointTriple& triple,
                              const bb::BbConfig& engine, double pos_tol = kPositiveTol);

// upper bound on the iteration count implied by the p-schedule
int iteration_bound(const PipConfig& cfg);

// trace export, one JSON record per line
std::string trace_to_jsonl(const PipTrace& trace);

}  // namespace pipopt::pip
