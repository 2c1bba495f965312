// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pipopt/common.hpp"

namespace pipopt::lp {

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

enum class RowSense : uint8_t { eq, le, ge };

struct LpModel {
  int num_cols = 0;
  std::vector<double> objective;  // minimize
  std::vector<double> col_lower, col_upper;

  struct Row {
    std::vector<int> cols;
    std::vector<double> coefs;
    RowSense sense = RowSense::eq;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  int add_col(double cost, double lower, double upper);
  void add_row(std::vector<int> cols, std::vector<double> coefs, RowSense sense, double rhs);
  void validate() const;
};

enum class ColState : uint8_t { basic, at_lower, at_upper, nonbasic_free };

// Per-column state over structural columns followed by one logical per row.
struct Basis {
  std::vector<ColState> state;
  bool empty() const { return state.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  std::vector<double> primal;         // structural values
  std::vector<double> dual;           // one per row
  std::vector<double> reduced_costs;  // structural
  double objective = 0.0;
  Basis basis;
  int iterations = 0;
};

struct SolverConfig {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;   // reduced-cost threshold
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  int stall_limit = 50;  // degenerate pivots before the Bland fallback
  int max_iterations = 50000;
};

// Revised simplex over bounded variables, dense basis factorization with
// product-form updates. One Solver instance per worker; the loaded model's
// bounds and costs may be mutated cheaply between solves, and the basis is
// kept across solves for warm restarts.
class Solver {
 public:
  explicit Solver(SolverConfig cfg = {});
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  void load(const LpModel& model);

  // cheap mutations between solves (structural columns only)
  void set_col_bounds(int col, double lower, double upper);
  void set_objective_coeff(int col, double cost);

  void install_basis(const Basis& basis);  // falls back to logical basis if unusable
  void reset_basis();                      // all-logical start

  LpSolution solve();

  int num_rows() const;
  int num_structural() const;

 private:
  struct Impl;
  Impl* impl_;
};

LpSolution solve_lp(const LpModel& model, const Basis* basis_hint = nullptr,
                    const SolverConfig& cfg = {});

// Feasibility-only solve: the model's objective is ignored.
LpSolution phase1_feasible(const LpModel& model, const SolverConfig& cfg = {});

}  // namespace pipopt::lp
