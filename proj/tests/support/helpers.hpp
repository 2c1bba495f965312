// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pipopt/gen.hpp"
#include "pipopt/lp.hpp"
#include "pipopt/model.hpp"
#include "pipopt/qp.hpp"

namespace pipopt::testing {

// The worked 1-d nonconvex QP: minimize -(x^2 - x)/2 on [0,1].
// KKT-LPCC pairs: (x, mu) and (1-x, lambda); objective x/2 - lambda.
inline qp::QpInstance example1_qp() {
  qp::QpInstance q;
  q.n = 1;
  q.m = 2;
  q.Q = Matrix(1, 1);
  q.Q(0, 0) = -1.0;
  q.c = {0.5};
  q.D = Matrix(2, 1);
  q.D(0, 0) = 1.0;
  q.D(1, 0) = -1.0;
  q.d = {0.0, -1.0};
  return q;
}

inline model::LpccInstance example1_lpcc(double big_m = 2.0) {
  return qp::to_lpcc(example1_qp(), big_m);
}

// triple in the (x, lambda, mu) notation of the 1-d example
inline model::PointTriple example1_triple(double x, double lambda, double mu) {
  model::PointTriple pt;
  pt.x = {x};
  pt.y = {x, 1.0 - x};       // slacks of x >= 0 and 1 - x >= 0
  pt.z = {mu, lambda};       // multipliers in row order
  return pt;
}

inline qp::KktTriple example1_kkt(double x, double lambda, double mu) {
  return qp::KktTriple{{x}, {x, 1.0 - x}, {mu, lambda}};
}

// independent per-term objective (second route for DERIVED checks)
inline double naive_objective(const model::LpccInstance& inst, const model::PointTriple& pt) {
  double acc = 0.0;
  for (int j = 0; j < inst.n; ++j) acc += inst.c[j] * pt.x[j];
  for (int i = 0; i < inst.m; ++i) acc += inst.e[i] * pt.y[i] + inst.f[i] * pt.z[i];
  return acc;
}

// bounded random generic LPCC: rows a_i'x + y_i + z_i = b_i with boxed x,
// so both pair members stay below b_i + |a_i|_1
inline model::LpccInstance random_generic_lpcc(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  model::LpccInstance inst;
  inst.n = n;
  inst.m = m;
  inst.k = m;
  inst.c.resize(n);
  inst.e.resize(m);
  inst.f.resize(m);
  for (double& v : inst.c) v = rng.uniform(-1.0, 1.0);
  for (double& v : inst.e) v = rng.uniform(-1.0, 1.0);
  for (double& v : inst.f) v = rng.uniform(-1.0, 1.0);
  inst.A = Matrix(m, n);
  inst.B = Matrix(m, m);
  inst.C = Matrix(m, m);
  inst.b.resize(m);
  double big = 0.0;
  for (int i = 0; i < m; ++i) {
    double norm1 = 0.0;
    for (int j = 0; j < n; ++j) {
      inst.A(i, j) = rng.uniform(-1.0, 1.0);
      norm1 += std::abs(inst.A(i, j));
    }
    inst.B(i, i) = 1.0;
    inst.C(i, i) = 1.0;
    inst.b[i] = norm1 + rng.uniform(0.5, 2.0);
    big = std::max(big, inst.b[i] + norm1);
  }
  inst.big_m = big + 1.0;
  inst.x_lower.assign(n, -1.0);
  inst.x_upper.assign(n, 1.0);
  model::finalize_bounds(inst);
  inst.validate();
  return inst;
}

// cold pattern-by-pattern enumeration, no shared machinery with the oracle's
// Gray-code walk; reference for tiny instances only
struct NaiveGlobal {
  bool feasible = false;
  double objective = kInf;
  model::PointTriple triple;
};

inline NaiveGlobal naive_enumerate(const model::LpccInstance& inst) {
  NaiveGlobal best;
  const int m = inst.m;
  for (std::uint64_t bits = 0; bits < (1ull << m); ++bits) {
    lp::LpModel lpm;
    for (int j = 0; j < inst.n; ++j) lpm.add_col(inst.c[j], inst.x_lower[j], inst.x_upper[j]);
    for (int i = 0; i < m; ++i) {
      bool y_zero = (bits >> i) & 1u;
      lpm.add_col(inst.e[i], 0.0, y_zero ? 0.0 : inst.y_bound(i));
    }
    for (int i = 0; i < m; ++i) {
      bool y_zero = (bits >> i) & 1u;
      lpm.add_col(inst.f[i], 0.0, y_zero ? inst.z_bound(i) : 0.0);
    }
    for (int r = 0; r < inst.k; ++r) {
      std::vector<int> cols;
      std::vector<double> coefs;
      for (int j = 0; j < inst.n; ++j)
        if (inst.A(r, j) != 0.0) {
          cols.push_back(j);
          coefs.push_back(inst.A(r, j));
        }
      for (int i = 0; i < m; ++i)
        if (inst.B(r, i) != 0.0) {
          cols.push_back(inst.n + i);
          coefs.push_back(inst.B(r, i));
        }
      for (int i = 0; i < m; ++i)
        if (inst.C(r, i) != 0.0) {
          cols.push_back(inst.n + m + i);
          coefs.push_back(inst.C(r, i));
        }
      lpm.add_row(std::move(cols), std::move(coefs), lp::RowSense::eq, inst.b[r]);
    }
    lp::LpSolution sol = lp::solve_lp(lpm);
    if (sol.status != lp::LpStatus::optimal) continue;
    if (!best.feasible || sol.objective < best.objective) {
      best.feasible = true;
      best.objective = sol.objective;
      best.triple.x.assign(sol.primal.begin(), sol.primal.begin() + inst.n);
      best.triple.y.assign(sol.primal.begin() + inst.n, sol.primal.begin() + inst.n + m);
      best.triple.z.assign(sol.primal.begin() + inst.n + m, sol.primal.end());
    }
  }
  return best;
}

}  // namespace pipopt::testing
