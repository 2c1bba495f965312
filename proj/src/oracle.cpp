// SPDX-License-Identifier: Apache-2.0
#include "pipopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace pipopt::oracle {

namespace {

// base LP shared by every piece: x, y, z columns plus the equality block
lp::LpModel base_lp(const model::LpccInstance& inst) {
  lp::LpModel lpm;
  for (int j = 0; j < inst.n; ++j) lpm.add_col(inst.c[j], inst.x_lower[j], inst.x_upper[j]);
  for (int i = 0; i < inst.m; ++i) lpm.add_col(inst.e[i], 0.0, inst.y_bound(i));
  for (int i = 0; i < inst.m; ++i) lpm.add_col(inst.f[i], 0.0, inst.z_bound(i));
  for (int r = 0; r < inst.k; ++r) {
    std::vector<int> cols;
    std::vector<double> coefs;
    for (int j = 0; j < inst.n; ++j)
      if (inst.A(r, j) != 0.0) {
        cols.push_back(j);
        coefs.push_back(inst.A(r, j));
      }
    for (int i = 0; i < inst.m; ++i)
      if (inst.B(r, i) != 0.0) {
        cols.push_back(inst.n + i);
        coefs.push_back(inst.B(r, i));
      }
    for (int i = 0; i < inst.m; ++i)
      if (inst.C(r, i) != 0.0) {
        cols.push_back(inst.n + inst.m + i);
        coefs.push_back(inst.C(r, i));
      }
    lpm.add_row(std::move(cols), std::move(coefs), lp::RowSense::eq, inst.b[r]);
  }
  return lpm;
}

void apply_side(lp::Solver& solver, const model::LpccInstance& inst, int pair, uint8_t side) {
  int ycol = inst.n + pair;
  int zcol = inst.n + inst.m + pair;
  switch (side) {
    case 0:  // y open, z = 0
      solver.set_col_bounds(ycol, 0.0, inst.y_bound(pair));
      solver.set_col_bounds(zcol, 0.0, 0.0);
      break;
    case 1:  // z open, y = 0
      solver.set_col_bounds(ycol, 0.0, 0.0);
      solver.set_col_bounds(zcol, 0.0, inst.z_bound(pair));
      break;
    default:  // complementarity dropped
      solver.set_col_bounds(ycol, 0.0, inst.y_bound(pair));
      solver.set_col_bounds(zcol, 0.0, inst.z_bound(pair));
      break;
  }
}

model::PointTriple triple_from_primal(const model::LpccInstance& inst,
                                      const std::vector<double>& primal) {
  model::PointTriple pt;
  pt.x.assign(primal.begin(), primal.begin() + inst.n);
  pt.y.assign(primal.begin() + inst.n, primal.begin() + inst.n + inst.m);
  pt.z.assign(primal.begin() + inst.n + inst.m, primal.end());
  return pt;
}

struct ShardResult {
  bool feasible = false;
  double objective = kInf;
  std::vector<double> primal;
  std::uint64_t pattern_bits = ~0ull;
  std::uint64_t tried = 0;
};

// walk a Gray code over `free_bits` pairs with `prefix` fixed on the
// leading scope positions
ShardResult run_shard(const model::LpccInstance& inst, const std::vector<int>& scope,
                      const std::vector<uint8_t>& base_side, int prefix_bits,
                      std::uint64_t prefix) {
  const int nbits = static_cast<int>(scope.size());
  const int free_bits = nbits - prefix_bits;

  lp::Solver solver;
  solver.load(base_lp(inst));
  std::vector<uint8_t> side = base_side;
  for (int i = 0; i < inst.m; ++i) apply_side(solver, inst, i, side[i]);
  for (int t = 0; t < prefix_bits; ++t) {
    side[scope[free_bits + t]] = static_cast<uint8_t>((prefix >> t) & 1u);
    apply_side(solver, inst, scope[free_bits + t], side[scope[free_bits + t]]);
  }

  ShardResult best;
  std::uint64_t count = free_bits >= 64 ? 0 : (1ull << free_bits);

  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t gray = k ^ (k >> 1);
    if (k > 0) {
      std::uint64_t diff = gray ^ gray_prev;
      int bit = 0;
      while (!((diff >> bit) & 1u)) ++bit;
      int pair = scope[bit];
      side[pair] = static_cast<uint8_t>((gray >> bit) & 1u);
      apply_side(solver, inst, pair, side[pair]);
    } else {
      for (int t = 0; t < free_bits; ++t) {
        side[scope[t]] = 0;
        apply_side(solver, inst, scope[t], 0);
      }
    }
    gray_prev = gray;

    lp::LpSolution sol = solver.solve();
    ++best.tried;
    if (sol.status == lp::LpStatus::unbounded)
      throw Error("oracle: piece LP unbounded; instance violates its big-M contract");
    if (sol.status != lp::LpStatus::optimal) continue;

    std::uint64_t bits = gray | (prefix << free_bits);
    if (!best.feasible || sol.objective < best.objective - 1e-15 ||
        (std::abs(sol.objective - best.objective) <= 1e-15 && bits < best.pattern_bits)) {
      best.feasible = true;
      best.objective = sol.objective;
      best.primal = sol.primal;
      best.pattern_bits = bits;
    }
  }
  return best;
}

}  // namespace

GlobalResult enumerate_global(const model::LpccInstance& inst,
                              const std::optional<std::vector<int>>& pattern_scope,
                              int num_threads) {
  inst.validate();
  std::vector<int> scope;
  if (pattern_scope) {
    scope = *pattern_scope;
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    for (int i : scope)
      if (i < 0 || i >= inst.m) throw Error("enumerate_global: scope index out of range");
  } else {
    scope.resize(inst.m);
    for (int i = 0; i < inst.m; ++i) scope[i] = i;
  }
  if (scope.size() > 20) throw Error("enumerate_global: scope exceeds the 2^20 pattern budget");

  std::vector<uint8_t> base_side(inst.m, 2);  // out-of-scope pairs decoupled

  const int nbits = static_cast<int>(scope.size());
  int prefix_bits = 0;
  if (num_threads > 1 && nbits >= 4) {
    while ((1 << prefix_bits) < num_threads && prefix_bits < nbits - 1 && prefix_bits < 4)
      ++prefix_bits;
  }
  const int shards = 1 << prefix_bits;

  std::vector<ShardResult> results(shards);
  if (shards == 1) {
    results[0] = run_shard(inst, scope, base_side, 0, 0);
  } else {
    std::vector<std::future<ShardResult>> futs;
    for (int s = 0; s < shards; ++s)
      futs.push_back(std::async(std::launch::async, run_shard, std::cref(inst), std::cref(scope),
                                std::cref(base_side), prefix_bits,
                                static_cast<std::uint64_t>(s)));
    for (int s = 0; s < shards; ++s) results[s] = futs[s].get();
  }

  GlobalResult out;
  const ShardResult* best = nullptr;
  for (const ShardResult& r : results) {
    out.patterns_tried += r.tried;
    if (!r.feasible) continue;
    if (!best || r.objective < best->objective - 1e-15 ||
        (std::abs(r.objective - best->objective) <= 1e-15 && r.pattern_bits < best->pattern_bits))
      best = &r;
  }
  if (!best) return out;

  out.feasible = true;
  out.objective = best->objective;
  out.triple = triple_from_primal(inst, best->primal);
  out.pattern.assign(inst.m, 2);
  for (int t = 0; t < nbits; ++t)
    out.pattern[scope[t]] = static_cast<uint8_t>((best->pattern_bits >> t) & 1u);
  return out;
}

PieceResult solve_piece(const model::LpccInstance& inst, const std::vector<uint8_t>& side) {
  if (static_cast<int>(side.size()) != inst.m) throw Error("solve_piece: side length mismatch");
  lp::Solver solver;
  solver.load(base_lp(inst));
  for (int i = 0; i < inst.m; ++i) apply_side(solver, inst, i, side[i]);
  lp::LpSolution sol = solver.solve();
  PieceResult out;
  out.status = sol.status;
  if (sol.status == lp::LpStatus::optimal) {
    out.objective = sol.objective;
    out.triple = triple_from_primal(inst, sol.primal);
  }
  return out;
}

bool verify_local_min(const model::LpccInstance& inst, const model::PointTriple& triple,
                      double tol) {
  model::FeasibilityReport rep = model::check_feasible(inst, triple, std::max(tol, 1e-7));
  if (!rep.within(std::max(tol, 1e-7)))
    throw Error("verify_local_min: triple is not feasible");

  std::vector<int> degenerate;
  std::vector<uint8_t> side(inst.m, 0);
  for (int i = 0; i < inst.m; ++i) {
    bool ypos = triple.y[i] > tol, zpos = triple.z[i] > tol;
    if (ypos)
      side[i] = 0;
    else if (zpos)
      side[i] = 1;
    else
      degenerate.push_back(i);
  }
  if (degenerate.size() > 16) throw Error("verify_local_min: too many degenerate pairs (> 16)");

  double ref = model::evaluate_objective(inst, triple);

  lp::Solver solver;
  solver.load(base_lp(inst));
  const std::uint64_t count = 1ull << degenerate.size();
  std::uint64_t gray_prev = 0;
  for (int i = 0; i < inst.m; ++i) apply_side(solver, inst, i, side[i]);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t gray = k ^ (k >> 1);
    if (k > 0) {
      std::uint64_t diff = gray ^ gray_prev;
      int bit = 0;
      while (!((diff >> bit) & 1u)) ++bit;
      int pair = degenerate[bit];
      side[pair] = static_cast<uint8_t>((gray >> bit) & 1u);
      apply_side(solver, inst, pair, side[pair]);
    }
    gray_prev = gray;
    lp::LpSolution sol = solver.solve();
    if (sol.status == lp::LpStatus::optimal && sol.objective < ref - tol) return false;
    if (sol.status == lp::LpStatus::unbounded) return false;
  }
  return true;
}

}  // namespace pipopt::oracle
