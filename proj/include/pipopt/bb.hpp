// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pipopt/lp.hpp"
#include "pipopt/reform.hpp"

namespace pipopt::bb {

enum class SolveStatus {
  optimal,
  feasible_time_limit,
  infeasible,
  unbounded,
  no_incumbent_time_limit,
};

const char* to_string(SolveStatus s);

enum class BranchRule : uint8_t {
  most_fractional,       // ties to the lowest index
  complementarity_pair,  // prefer binaries whose pair has the larger spread
};

struct BbConfig {
  double time_limit = 60.0;  // seconds
  double rel_gap = 1e-6;
  double abs_gap = 1e-9;
  double int_tol = 1e-6;
  std::optional<std::int64_t> node_limit;
  BranchRule branching = BranchRule::most_fractional;
  lp::SolverConfig lp;
};

struct IncumbentEvent {
  double time_s = 0.0;
  double objective = 0.0;
  double bound = 0.0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<reform::ModelSolution> incumbent;
  double best_bound = -kInf;
  double gap = kInf;
  std::int64_t nodes_explored = 0;
  double wall_time = 0.0;
  std::vector<IncumbentEvent> events;  // one record per incumbent improvement
};

class WarmStartError : public Error {
 public:
  using Error::Error;
};

// Single-worker best-bound search with depth-first plunging; deterministic
// for a fixed model and config. An accepted warm start is installed as the
// initial incumbent only.
SolveOutcome solve_milp(const reform::MilpModel& model,
                        const std::optional<reform::ModelSolution>& warm_start = std::nullopt,
                        const BbConfig& cfg = {});

bool check_warm_start(const reform::MilpModel& model, const reform::ModelSolution& candidate,
                      double tol);

}  // namespace pipopt::bb
