// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pipopt/lp.hpp"
#include "support/helpers.hpp"

using namespace pipopt;
using namespace pipopt::lp;

TEST_SUITE_BEGIN("lp");

namespace {

// reference optimum by basis enumeration; equality rows, columns bounded
// below by 0 and unbounded above, so vertices are basic solutions
double brute_force_min(const LpModel& model) {
  const int m = static_cast<int>(model.rows.size());
  const int n = model.num_cols;
  // dense row matrix
  std::vector<std::vector<double>> A(m, std::vector<double>(n, 0.0));
  std::vector<double> rhs(m);
  for (int r = 0; r < m; ++r) {
    for (size_t t = 0; t < model.rows[r].cols.size(); ++t)
      A[r][model.rows[r].cols[t]] += model.rows[r].coefs[t];
    rhs[r] = model.rows[r].rhs;
  }
  double best = kInf;
  std::vector<int> pick(m);
  std::vector<int> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = j;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + m, true);
  std::sort(mask.begin(), mask.end());
  do {
    std::vector<int> basis;
    for (int j = 0; j < n; ++j)
      if (mask[j]) basis.push_back(j);
    // solve A_B x_B = rhs
    std::vector<std::vector<double>> M(m, std::vector<double>(m + 1, 0.0));
    for (int r = 0; r < m; ++r) {
      for (int t = 0; t < m; ++t) M[r][t] = A[r][basis[t]];
      M[r][m] = rhs[r];
    }
    bool singular = false;
    for (int k = 0; k < m && !singular; ++k) {
      int p = k;
      for (int i = k + 1; i < m; ++i)
        if (std::abs(M[i][k]) > std::abs(M[p][k])) p = i;
      if (std::abs(M[p][k]) < 1e-10) {
        singular = true;
        break;
      }
      std::swap(M[p], M[k]);
      for (int i = k + 1; i < m; ++i) {
        double f = M[i][k] / M[k][k];
        for (int c = k; c <= m; ++c) M[i][c] -= f * M[k][c];
      }
    }
    if (singular) continue;
    std::vector<double> xb(m);
    for (int k = m - 1; k >= 0; --k) {
      double acc = M[k][m];
      for (int c = k + 1; c < m; ++c) acc -= M[k][c] * xb[c];
      xb[k] = acc / M[k][k];
    }
    bool feas = true;
    for (double v : xb)
      if (v < -1e-9) feas = false;
    if (!feas) continue;
    double obj = 0.0;
    for (int t = 0; t < m; ++t) obj += model.objective[basis[t]] * xb[t];
    best = std::min(best, obj);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

double dual_objective(const LpModel& model, const LpSolution& sol) {
  double acc = 0.0;
  for (size_t r = 0; r < model.rows.size(); ++r) acc += sol.dual[r] * model.rows[r].rhs;
  for (int j = 0; j < model.num_cols; ++j) {
    if (sol.basis.state[j] == ColState::basic) continue;
    acc += sol.reduced_costs[j] * sol.primal[j];
  }
  return acc;
}

}  // namespace

TEST_CASE("one-variable bounds only") {
  LpModel m;
  m.add_col(1.0, 3.0, 10.0);
  LpSolution sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.primal[0] == doctest::Approx(3.0));
  CHECK(sol.objective == doctest::Approx(3.0));

  SUBCASE("maximize via negated cost is unbounded without an upper bound") {
    LpModel u;
    u.add_col(-1.0, 0.0, kInf);
    CHECK(solve_lp(u).status == LpStatus::unbounded);
  }
  SUBCASE("crossed constraints are infeasible") {
    LpModel inf;
    int x = inf.add_col(0.0, 0.0, kInf);
    inf.add_row({x}, {1.0}, RowSense::ge, 2.0);
    inf.add_row({x}, {1.0}, RowSense::le, 1.0);
    CHECK(solve_lp(inf).status == LpStatus::infeasible);
  }
}

TEST_CASE("rows with all three senses") {
  LpModel m;
  int x = m.add_col(1.0, 0.0, kInf);
  int y = m.add_col(2.0, 0.0, kInf);
  m.add_row({x, y}, {1.0, 1.0}, RowSense::ge, 4.0);
  m.add_row({x}, {1.0}, RowSense::le, 3.0);
  m.add_row({x, y}, {1.0, -1.0}, RowSense::eq, 1.0);
  // x - y = 1, x <= 3, x + y >= 4 -> x >= 2.5; min x + 2y = 3x - 2
  LpSolution sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.primal[0] == doctest::Approx(2.5));
  CHECK(sol.primal[1] == doctest::Approx(1.5));
  CHECK(sol.objective == doctest::Approx(5.5));
}

TEST_CASE("bound flip on a boxed column without rows") {
  LpModel m;
  m.add_col(-1.0, 0.0, 5.0);
  LpSolution sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.primal[0] == doctest::Approx(5.0));
}

TEST_CASE("random equality LPs match basis enumeration") {
  Rng rng(41);
  int solved = 0;
  for (int rep = 0; rep < 25; ++rep) {
    int m = rng.uniform_int(2, 4);
    int n = m + rng.uniform_int(2, 5);
    LpModel model;
    for (int j = 0; j < n; ++j) model.add_col(rng.uniform(-1.0, 1.0), 0.0, kInf);
    // random rows around a nonnegative target point keep things feasible
    std::vector<double> target(n);
    for (double& v : target) v = rng.uniform(0.0, 2.0);
    for (int r = 0; r < m; ++r) {
      std::vector<int> cols;
      std::vector<double> coefs;
      double rhs = 0.0;
      for (int j = 0; j < n; ++j) {
        double a = rng.uniform(-1.0, 1.0);
        cols.push_back(j);
        coefs.push_back(a);
        rhs += a * target[j];
      }
      model.add_row(std::move(cols), std::move(coefs), RowSense::eq, rhs);
    }
    // bound the feasible set: sum x <= big via slack column
    {
      std::vector<int> cols;
      std::vector<double> coefs;
      for (int j = 0; j < n; ++j) {
        cols.push_back(j);
        coefs.push_back(1.0);
      }
      int slack = model.add_col(0.0, 0.0, kInf);
      cols.push_back(slack);
      coefs.push_back(1.0);
      model.add_row(std::move(cols), std::move(coefs), RowSense::eq, 50.0);
    }
    double ref = brute_force_min(model);
    LpSolution sol = solve_lp(model);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(ref).epsilon(1e-7));
    ++solved;
  }
  CHECK(solved == 25);
}

TEST_CASE("weak duality on every optimal result") {
  Rng rng(77);
  for (int rep = 0; rep < 30; ++rep) {
    int n = rng.uniform_int(3, 8);
    int m = rng.uniform_int(1, 4);
    LpModel model;
    for (int j = 0; j < n; ++j)
      model.add_col(rng.uniform(-1.0, 1.0), 0.0, rng.uniform01() < 0.3 ? kInf : rng.uniform(1.0, 4.0));
    std::vector<double> target(n);
    for (double& v : target) v = rng.uniform(0.0, 0.9);
    for (int r = 0; r < m; ++r) {
      std::vector<int> cols;
      std::vector<double> coefs;
      double act = 0.0;
      for (int j = 0; j < n; ++j) {
        double a = rng.uniform(-1.0, 1.0);
        cols.push_back(j);
        coefs.push_back(a);
        act += a * target[j];
      }
      RowSense sense = static_cast<RowSense>(rng.uniform_int(0, 2));
      double rhs = sense == RowSense::le ? act + 0.5 : sense == RowSense::ge ? act - 0.5 : act;
      model.add_row(std::move(cols), std::move(coefs), sense, rhs);
    }
    LpSolution sol = solve_lp(model);
    if (sol.status != LpStatus::optimal) continue;
    CHECK(std::abs(sol.objective - dual_objective(model, sol)) <= 1e-7);
  }
}

TEST_CASE("warm re-solve of an optimal basis takes zero iterations") {
  LpModel m;
  int x = m.add_col(1.0, 0.0, kInf);
  int y = m.add_col(2.0, 0.0, kInf);
  m.add_row({x, y}, {1.0, 1.0}, RowSense::ge, 4.0);
  LpSolution first = solve_lp(m);
  REQUIRE(first.status == LpStatus::optimal);
  LpSolution again = solve_lp(m, &first.basis);
  CHECK(again.status == LpStatus::optimal);
  CHECK(again.iterations == 0);
  CHECK(again.objective == doctest::Approx(first.objective).epsilon(1e-12));
}

TEST_CASE("degenerate cycling guard terminates") {
  // classic cycling-prone LP (Beale); Bland fallback must finish it
  LpModel m;
  int x1 = m.add_col(-0.75, 0.0, kInf);
  int x2 = m.add_col(150.0, 0.0, kInf);
  int x3 = m.add_col(-0.02, 0.0, kInf);
  int x4 = m.add_col(6.0, 0.0, kInf);
  m.add_row({x1, x2, x3, x4}, {0.25, -60.0, -0.04, 9.0}, RowSense::le, 0.0);
  m.add_row({x1, x2, x3, x4}, {0.5, -90.0, -0.02, 3.0}, RowSense::le, 0.0);
  m.add_row({x3}, {1.0}, RowSense::le, 1.0);
  LpSolution sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
  CHECK(sol.iterations < 1000);
}

TEST_CASE("phase1_feasible ignores the objective") {
  LpModel m;
  int x = m.add_col(-5.0, 0.0, kInf);  // would be unbounded in phase 2
  m.add_row({x}, {1.0}, RowSense::ge, 3.0);
  LpSolution sol = phase1_feasible(m);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.primal[0] >= 3.0 - 1e-9);

  SUBCASE("infeasible stays infeasible") {
    LpModel inf;
    int v = inf.add_col(0.0, 0.0, kInf);
    inf.add_row({v}, {1.0}, RowSense::ge, 2.0);
    inf.add_row({v}, {1.0}, RowSense::le, 1.0);
    CHECK(phase1_feasible(inf).status == LpStatus::infeasible);
  }
}

TEST_CASE("free variables and negative bounds") {
  LpModel m;
  int x = m.add_col(1.0, -kInf, kInf);
  int y = m.add_col(0.0, -3.0, -1.0);
  m.add_row({x, y}, {1.0, 1.0}, RowSense::ge, 0.0);
  // x >= -y, y in [-3,-1]: min x at y = 1? y <= -1 so x >= 1
  LpSolution sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
}

TEST_CASE("solver reuse with bound mutation warm starts") {
  LpModel m;
  int x = m.add_col(1.0, 0.0, 10.0);
  int y = m.add_col(1.0, 0.0, 10.0);
  m.add_row({x, y}, {1.0, 1.0}, RowSense::eq, 5.0);
  Solver solver;
  solver.load(m);
  LpSolution a = solver.solve();
  REQUIRE(a.status == LpStatus::optimal);
  CHECK(a.objective == doctest::Approx(5.0));
  solver.set_col_bounds(x, 0.0, 0.0);  // force the pair onto y
  LpSolution b = solver.solve();
  REQUIRE(b.status == LpStatus::optimal);
  CHECK(b.primal[1] == doctest::Approx(5.0));
  solver.set_col_bounds(x, 0.0, 10.0);
  solver.set_col_bounds(y, 0.0, 0.0);
  LpSolution c = solver.solve();
  REQUIRE(c.status == LpStatus::optimal);
  CHECK(c.primal[0] == doctest::Approx(5.0));
}

TEST_SUITE_END();
