// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "pipopt/bb.hpp"
#include "pipopt/gen.hpp"
#include "pipopt/oracle.hpp"
#include "support/helpers.hpp"

using namespace pipopt;
using namespace pipopt::testing;

TEST_SUITE_BEGIN("bb");

namespace {

bb::BbConfig tight() {
  bb::BbConfig cfg;
  cfg.rel_gap = 0.0;
  cfg.abs_gap = 1e-9;
  cfg.time_limit = 120.0;
  return cfg;
}

}  // namespace

TEST_CASE("no binaries reduces to the LP") {
  model::LpccInstance inst = random_generic_lpcc(2, 4, 51);
  model::IndexPartition part;
  part.m_y_plus = {0, 1};
  part.m_z_plus = {2, 3};
  reform::MilpModel mm = reform::build_partial_milp(inst, part);
  REQUIRE(mm.num_binaries() == 0);
  bb::SolveOutcome out = bb::solve_milp(mm, std::nullopt, tight());
  lp::LpModel lpm;
  for (size_t j = 0; j < mm.cols.size(); ++j)
    lpm.add_col(mm.objective[j], mm.cols[j].lower, mm.cols[j].upper);
  for (const reform::MilpRow& r : mm.rows) {
    lp::RowSense s = r.sense == reform::RowSense::eq   ? lp::RowSense::eq
                     : r.sense == reform::RowSense::le ? lp::RowSense::le
                                                       : lp::RowSense::ge;
    lpm.add_row(r.cols, r.coefs, s, r.rhs);
  }
  lp::LpSolution ref = lp::solve_lp(lpm);
  if (ref.status == lp::LpStatus::optimal) {
    REQUIRE(out.status == bb::SolveStatus::optimal);
    CHECK(out.incumbent->objective == doctest::Approx(ref.objective).epsilon(1e-9));
  } else {
    CHECK(out.status == bb::SolveStatus::infeasible);
  }
}

TEST_CASE("worked example solves to zero") {
  reform::MilpModel mm = reform::build_full_milp(example1_lpcc());
  bb::SolveOutcome out = bb::solve_milp(mm, std::nullopt, tight());
  REQUIRE(out.status == bb::SolveStatus::optimal);
  CHECK(out.incumbent->objective == doctest::Approx(0.0).epsilon(1e-9));
  model::PointTriple best = reform::extract_triple(mm, *out.incumbent);
  bool at_zero = std::abs(best.x[0]) < 1e-7;
  bool at_one = std::abs(best.x[0] - 1.0) < 1e-7;
  CHECK((at_zero || at_one));
}

TEST_CASE("full MILPs agree with cold pattern enumeration") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    model::LpccInstance inst = random_generic_lpcc(3, 8, seed * 13);
    NaiveGlobal ref = naive_enumerate(inst);
    bb::SolveOutcome out = bb::solve_milp(reform::build_full_milp(inst), std::nullopt, tight());
    REQUIRE(ref.feasible);
    REQUIRE(out.status == bb::SolveStatus::optimal);
    CHECK(out.incumbent->objective == doctest::Approx(ref.objective).epsilon(1e-6));
  }
}

TEST_CASE("every accepted solution satisfies complementarity within tolerance") {
  model::LpccInstance inst = random_generic_lpcc(2, 10, 311);
  reform::MilpModel mm = reform::build_full_milp(inst);
  bb::SolveOutcome out = bb::solve_milp(mm, std::nullopt, tight());
  REQUIRE(out.status == bb::SolveStatus::optimal);
  model::PointTriple best = reform::extract_triple(mm, *out.incumbent);
  for (int i = 0; i < inst.m; ++i)
    CHECK(std::min(best.y[i], best.z[i]) <= inst.big_m * 1e-6);
}

TEST_CASE("warm starts are never made worse and events stay monotone") {
  model::LpccInstance inst = random_generic_lpcc(3, 10, 71);
  reform::MilpModel mm = reform::build_full_milp(inst);
  // suboptimal feasible triple from an arbitrary piece
  oracle::PieceResult piece = oracle::solve_piece(inst, std::vector<uint8_t>(10, 0));
  REQUIRE(piece.status == lp::LpStatus::optimal);
  reform::ModelSolution warm = reform::embed_triple(mm, piece.triple);
  bb::SolveOutcome out = bb::solve_milp(mm, warm, tight());
  REQUIRE(out.incumbent.has_value());
  CHECK(out.incumbent->objective <= warm.objective + 1e-9);
  REQUIRE(!out.events.empty());
  CHECK(out.events.front().objective == doctest::Approx(warm.objective).epsilon(1e-9));
  for (size_t t = 1; t < out.events.size(); ++t) {
    CHECK(out.events[t].objective <= out.events[t - 1].objective + 1e-12);
    CHECK(out.events[t].bound >= out.events[t - 1].bound - 1e-9);
  }
  CHECK(out.best_bound <= out.incumbent->objective + 1e-9);
}

TEST_CASE("check_warm_start accepts embeddings and rejects violations") {
  model::LpccInstance inst = random_generic_lpcc(2, 6, 23);
  reform::MilpModel mm = reform::build_full_milp(inst);
  oracle::PieceResult piece = oracle::solve_piece(inst, std::vector<uint8_t>(6, 1));
  REQUIRE(piece.status == lp::LpStatus::optimal);
  reform::ModelSolution sol = reform::embed_triple(mm, piece.triple);
  CHECK(bb::check_warm_start(mm, sol, 1e-6));

  SUBCASE("fractional binary fails") {
    reform::ModelSolution bad = sol;
    bad.values[mm.w_col[0]] = 0.5;
    CHECK_FALSE(bb::check_warm_start(mm, bad, 1e-6));
  }
  SUBCASE("indicator row violated by twice the tolerance fails") {
    reform::ModelSolution bad = sol;
    // pair 0 is on the z side (binary closes y); push y above M*w by 2 tol
    bad.values[mm.y_col[0]] += 2e-6;
    CHECK_FALSE(bb::check_warm_start(mm, bad, 1e-6));
  }
  SUBCASE("infeasible warm start throws") {
    reform::ModelSolution bad = sol;
    bad.values[mm.w_col[0]] = 0.5;
    CHECK_THROWS_AS(bb::solve_milp(mm, bad, tight()), bb::WarmStartError);
  }
}

TEST_CASE("time limit honored within the one-node budget") {
  qp::QpInstance q = gen::gen_stqp(24, 0.75, 5);
  reform::MilpModel mm = gen::stqp_to_milp(q);
  bb::BbConfig cfg;
  cfg.time_limit = 0.5;
  bb::SolveOutcome out = bb::solve_milp(mm, std::nullopt, cfg);
  CHECK(out.wall_time <= 0.5 * 1.1 + 0.2);
  CHECK((out.status == bb::SolveStatus::feasible_time_limit ||
         out.status == bb::SolveStatus::no_incumbent_time_limit ||
         out.status == bb::SolveStatus::optimal));
}

TEST_CASE("node limit and determinism") {
  model::LpccInstance inst = random_generic_lpcc(3, 9, 101);
  reform::MilpModel mm = reform::build_full_milp(inst);
  bb::BbConfig cfg = tight();
  bb::SolveOutcome a = bb::solve_milp(mm, std::nullopt, cfg);
  bb::SolveOutcome b = bb::solve_milp(mm, std::nullopt, cfg);
  REQUIRE(a.status == bb::SolveStatus::optimal);
  CHECK(a.nodes_explored == b.nodes_explored);
  CHECK(a.incumbent->objective == b.incumbent->objective);
  CHECK(a.incumbent->values == b.incumbent->values);

  cfg.node_limit = 1;
  bb::SolveOutcome limited = bb::solve_milp(mm, std::nullopt, cfg);
  CHECK(limited.nodes_explored <= 1);
}

TEST_CASE("infeasible and unbounded roots are reported as such") {
  model::LpccInstance inst = random_generic_lpcc(2, 3, 77);
  // equality rows demand b, but force y and z to zero via bounds: pick b > 0
  model::IndexPartition part;
  part.m_y_plus = {0, 1, 2};
  reform::MilpModel mm = reform::build_partial_milp(inst, part);
  for (int i = 0; i < 3; ++i) mm.cols[mm.y_col[i]].upper = 0.0;  // z already 0
  for (int j = 0; j < 2; ++j) {
    mm.cols[mm.x_col[j]].lower = 0.0;
    mm.cols[mm.x_col[j]].upper = 0.0;
  }
  bb::SolveOutcome out = bb::solve_milp(mm, std::nullopt, tight());
  CHECK(out.status == bb::SolveStatus::infeasible);

  SUBCASE("free objective ray reports unbounded") {
    reform::MilpModel um;
    um.n_x = 1;
    um.n_pairs = 0;
    um.x_col = {0};
    um.cols.push_back({"x0", -kInf, kInf, reform::VarKind::continuous, reform::ColRole::x, 0, true});
    um.objective = {1.0};
    bb::SolveOutcome u = bb::solve_milp(um, std::nullopt, tight());
    CHECK(u.status == bb::SolveStatus::unbounded);
  }
}

TEST_SUITE_END();
