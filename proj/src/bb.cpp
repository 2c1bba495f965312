// SPDX-License-Identifier: Apache-2.0
#include "pipopt/bb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

namespace pipopt::bb {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "Optimal";
    case SolveStatus::feasible_time_limit: return "FeasibleTimeLimit";
    case SolveStatus::infeasible: return "Infeasible";
    case SolveStatus::unbounded: return "Unbounded";
    case SolveStatus::no_incumbent_time_limit: return "NoIncumbentTimeLimit";
  }
  return "?";
}

bool check_warm_start(const reform::MilpModel& model, const reform::ModelSolution& candidate,
                      double tol) {
  if (candidate.values.size() != model.cols.size()) throw Error("warm start length mismatch");
  return model.solution_violation(candidate.values) <= tol;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

lp::LpModel to_lp_relaxation(const reform::MilpModel& mm) {
  lp::LpModel lpm;
  for (size_t j = 0; j < mm.cols.size(); ++j)
    lpm.add_col(mm.objective[j], mm.cols[j].lower, mm.cols[j].upper);
  for (const reform::MilpRow& r : mm.rows) {
    lp::RowSense s = r.sense == reform::RowSense::eq   ? lp::RowSense::eq
                     : r.sense == reform::RowSense::le ? lp::RowSense::le
                                                       : lp::RowSense::ge;
    lpm.add_row(r.cols, r.coefs, s, r.rhs);
  }
  return lpm;
}

struct Node {
  std::vector<int8_t> fixing;  // per binary: -1 free, 0, 1
  lp::Basis basis;
  double bound = -kInf;
  std::int64_t seq = 0;
  int depth = 0;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;  // min-heap on bound
    return a->seq > b->seq;
  }
};

}  // namespace

SolveOutcome solve_milp(const reform::MilpModel& mm,
                        const std::optional<reform::ModelSolution>& warm_start,
                        const BbConfig& cfg) {
  mm.validate();
  auto t0 = Clock::now();
  SolveOutcome out;

  std::vector<int> bin_cols;
  for (size_t j = 0; j < mm.cols.size(); ++j)
    if (mm.cols[j].kind == reform::VarKind::binary) bin_cols.push_back(static_cast<int>(j));
  const int nbin = static_cast<int>(bin_cols.size());

  if (warm_start) {
    if (!check_warm_start(mm, *warm_start, std::max(cfg.int_tol, cfg.lp.feas_tol * 10)))
      throw WarmStartError("warm start rejected: infeasible for the model");
    out.incumbent = *warm_start;
    out.incumbent->objective = mm.objective_value(warm_start->values);
  }

  lp::Solver solver(cfg.lp);
  solver.load(to_lp_relaxation(mm));

  auto apply_fixing = [&](const std::vector<int8_t>& fixing) {
    for (int t = 0; t < nbin; ++t) {
      int col = bin_cols[t];
      if (fixing[t] < 0)
        solver.set_col_bounds(col, 0.0, 1.0);
      else
        solver.set_col_bounds(col, fixing[t], fixing[t]);
    }
  };

  double incumbent_obj = out.incumbent ? out.incumbent->objective : kInf;
  if (out.incumbent) out.events.push_back({seconds_since(t0), incumbent_obj, -kInf});

  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open;
  std::int64_t seq = 0;

  auto root = std::make_shared<Node>();
  root->fixing.assign(nbin, -1);
  root->bound = -kInf;
  root->seq = seq++;
  open.push(root);

  std::shared_ptr<Node> dive;  // depth-first plunge chain
  bool hit_limit = false;
  bool root_unbounded = false;
  bool gap_stop = false;

  auto record_incumbent = [&](const std::vector<double>& values, double obj) {
    if (obj >= incumbent_obj - cfg.abs_gap) return false;
    incumbent_obj = obj;
    out.incumbent = reform::ModelSolution{values, obj};
    return true;
  };

  auto frontier_bound = [&]() {
    double lb = incumbent_obj;
    if (!open.empty()) lb = std::min(lb, open.top()->bound);
    if (dive) lb = std::min(lb, dive->bound);
    return lb;
  };

  while (dive || !open.empty()) {
    if (seconds_since(t0) > cfg.time_limit) {
      hit_limit = true;
      break;
    }
    if (cfg.node_limit && out.nodes_explored >= *cfg.node_limit) {
      hit_limit = true;
      break;
    }
    if (out.incumbent) {
      double lb = frontier_bound();
      if (incumbent_obj - lb <= std::max(cfg.abs_gap, cfg.rel_gap * std::abs(incumbent_obj))) {
        out.best_bound = lb;
        gap_stop = true;
        break;
      }
    }

    std::shared_ptr<Node> node;
    if (dive) {
      node = std::move(dive);
      dive.reset();
    } else {
      node = open.top();
      open.pop();
    }

    if (node->bound >= incumbent_obj - cfg.abs_gap) continue;

    ++out.nodes_explored;
    apply_fixing(node->fixing);
    if (!node->basis.empty())
      solver.install_basis(node->basis);
    else
      solver.reset_basis();
    lp::LpSolution rel = solver.solve();

    if (rel.status == lp::LpStatus::infeasible) continue;
    if (rel.status == lp::LpStatus::unbounded) {
      if (node->depth == 0) {
        root_unbounded = true;
        break;
      }
      throw Error("branch-and-bound: child relaxation unbounded under a bounded root");
    }
    if (rel.status == lp::LpStatus::numerical_failure)
      throw Error("branch-and-bound: LP numerical failure");

    double node_bound = rel.objective;
    if (node_bound >= incumbent_obj - cfg.abs_gap) continue;

    int branch_t = -1;
    double branch_val = 0.0, best_score = -1.0;
    for (int t = 0; t < nbin; ++t) {
      double v = rel.primal[bin_cols[t]];
      double frac = std::abs(v - std::round(v));
      if (frac <= cfg.int_tol) continue;
      double score;
      if (cfg.branching == BranchRule::complementarity_pair) {
        int pair = mm.cols[bin_cols[t]].role_index;
        double spread = 0.0;
        if (pair >= 0 && mm.y_col[pair] >= 0 && mm.z_col[pair] >= 0)
          spread = std::abs(rel.primal[mm.y_col[pair]]) + std::abs(rel.primal[mm.z_col[pair]]);
        score = std::min(frac, 1.0 - frac) * (1.0 + spread);
      } else {
        score = std::min(frac, 1.0 - frac);
      }
      if (score > best_score + 1e-15) {
        best_score = score;
        branch_t = t;
        branch_val = v;
      }
    }

    if (branch_t < 0) {
      // integral within tolerance: pin the binaries and re-solve so the
      // incumbent is exactly binary and its objective is the piece optimum
      std::vector<int8_t> fixed(node->fixing);
      for (int t = 0; t < nbin; ++t)
        fixed[t] = static_cast<int8_t>(std::lround(rel.primal[bin_cols[t]]));
      apply_fixing(fixed);
      lp::LpSolution exact = solver.solve();
      if (exact.status == lp::LpStatus::optimal) {
        std::vector<double> values = exact.primal;
        for (int t = 0; t < nbin; ++t) values[bin_cols[t]] = fixed[t];
        if (record_incumbent(values, exact.objective))
          out.events.push_back(
              {seconds_since(t0), incumbent_obj, std::min(frontier_bound(), node_bound)});
      }
      continue;
    }

    auto down = std::make_shared<Node>();
    auto up = std::make_shared<Node>();
    for (auto* child : {down.get(), up.get()}) {
      child->fixing = node->fixing;
      child->basis = rel.basis;
      child->bound = node_bound;
      child->depth = node->depth + 1;
    }
    down->fixing[branch_t] = 0;
    up->fixing[branch_t] = 1;
    down->seq = seq++;
    up->seq = seq++;

    // plunge toward the nearer integer, queue the other child
    if (branch_val - std::floor(branch_val) <= 0.5) {
      dive = down;
      open.push(up);
    } else {
      dive = up;
      open.push(down);
    }
  }

  out.wall_time = seconds_since(t0);

  if (root_unbounded) {
    out.status = SolveStatus::unbounded;
    out.best_bound = -kInf;
    return out;
  }

  if (hit_limit) {
    double lb = frontier_bound();
    out.best_bound = lb;
    if (out.incumbent) {
      out.status = SolveStatus::feasible_time_limit;
      out.gap = (incumbent_obj - lb) / std::max(1.0, std::abs(incumbent_obj));
    } else {
      out.status = SolveStatus::no_incumbent_time_limit;
      out.gap = kInf;
    }
    return out;
  }

  if (out.incumbent) {
    out.status = SolveStatus::optimal;
    if (!gap_stop) out.best_bound = incumbent_obj;
    out.gap = std::max(0.0, (incumbent_obj - out.best_bound) / std::max(1.0, std::abs(incumbent_obj)));
  } else {
    out.status = SolveStatus::infeasible;
    out.best_bound = kInf;
  }
  return out;
}

}  // namespace pipopt::bb
