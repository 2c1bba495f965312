// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "pipopt/gen.hpp"
#include "pipopt/oracle.hpp"
#include "pipopt/qp.hpp"
#include "support/helpers.hpp"

using namespace pipopt;
using namespace pipopt::testing;

TEST_SUITE_BEGIN("qp");

namespace {

bb::BbConfig tight() {
  bb::BbConfig cfg;
  cfg.rel_gap = 0.0;
  cfg.time_limit = 60.0;
  return cfg;
}

qp::QpInstance one_d_convex() {
  // minimize x^2/2 subject to x >= 1
  qp::QpInstance q;
  q.n = 1;
  q.m = 1;
  q.Q = Matrix(1, 1);
  q.Q(0, 0) = 1.0;
  q.c = {0.0};
  q.D = Matrix(1, 1);
  q.D(0, 0) = 1.0;
  q.d = {1.0};
  return q;
}

}  // namespace

TEST_CASE("objective values") {
  qp::QpInstance q = example1_qp();
  CHECK(qp::objective(q, {0.0}) == 0.0);
  CHECK(qp::objective(q, {0.5}) == doctest::Approx(0.125).epsilon(1e-12));
  Rng rng(3);
  qp::QpInstance r;
  r.n = 4;
  r.m = 1;
  r.Q = Matrix(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      double v = rng.uniform(-1.0, 1.0);
      r.Q(i, j) = v;
      r.Q(j, i) = v;
    }
  r.c = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  r.D = Matrix(1, 4);
  r.d = {0.0};
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-2.0, 2.0);
    double naive = 0.0;
    for (int i = 0; i < 4; ++i) {
      naive += r.c[i] * x[i];
      for (int j = 0; j < 4; ++j) naive += 0.5 * x[i] * r.Q(i, j) * x[j];
    }
    CHECK(qp::objective(r, x) == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("KKT LPCC of the worked example has the published structure") {
  model::LpccInstance inst = example1_lpcc();
  CHECK(inst.n == 1);
  CHECK(inst.m == 2);
  CHECK(inst.k == 3);
  CHECK(inst.kind == model::InstanceKind::qp_kkt);
  // stationarity row: -x - mu + lambda = -1/2
  CHECK(inst.A(0, 0) == -1.0);
  CHECK(inst.C(0, 0) == -1.0);
  CHECK(inst.C(0, 1) == 1.0);
  CHECK(inst.b[0] == -0.5);
  // objective x/2 - lambda
  CHECK(inst.c[0] == 0.5);
  CHECK(inst.f[0] == 0.0);
  CHECK(inst.f[1] == -1.0);
  // round trip back to the QP
  qp::QpInstance back = qp::from_kkt_lpcc(inst);
  CHECK(back.Q(0, 0) == -1.0);
  CHECK(back.c[0] == 0.5);
  CHECK(back.d == std::vector<double>{0.0, -1.0});
}

TEST_CASE("objective identity: l equals 2q on feasible triples") {
  Rng rng(17);
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 200; ++seed) {
    qp::QpInstance q;
    q.n = 3;
    q.m = 4;
    q.Q = Matrix(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        double v = rng.uniform(-1.0, 1.0);
        q.Q(i, j) = v;
        q.Q(j, i) = v;
      }
    q.c = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    // box [-2, 2]^3 needs 6 rows; use 4 rows: x >= -2 per coordinate and
    // sum x <= 6 to stay bounded enough for the pieces sampled here
    q.D = Matrix(4, 3);
    q.d = {-2.0, -2.0, -2.0, -6.0};
    for (int j = 0; j < 3; ++j) q.D(j, j) = 1.0;
    for (int j = 0; j < 3; ++j) q.D(3, j) = -1.0;
    model::LpccInstance inst = qp::to_lpcc(q, 50.0);
    std::vector<uint8_t> side(4);
    for (auto& s : side) s = static_cast<uint8_t>(rng.uniform_int(0, 1));
    oracle::PieceResult piece = oracle::solve_piece(inst, side);
    if (piece.status != lp::LpStatus::optimal) continue;
    double ell = model::evaluate_objective(inst, piece.triple);
    double two_q = 2.0 * qp::objective(q, piece.triple.x);
    CHECK(ell == doctest::Approx(two_q).epsilon(1e-9));
    ++checked;
  }
}

TEST_CASE("one-dimensional convex QP: LPCC optimum at (1, 0, 1)") {
  qp::QpInstance q = one_d_convex();
  model::LpccInstance inst = qp::to_lpcc(q, 10.0);
  oracle::GlobalResult g = oracle::enumerate_global(inst);
  REQUIRE(g.feasible);
  CHECK(g.objective == doctest::Approx(1.0).epsilon(1e-9));  // 2 q(1) = 1
  CHECK(g.triple.x[0] == doctest::Approx(1.0));
  CHECK(g.triple.y[0] == doctest::Approx(0.0));
  CHECK(g.triple.z[0] == doctest::Approx(1.0));
}

TEST_CASE("stationary points") {
  SUBCASE("1-d convex from the right endpoint") {
    qp::QpInstance q = one_d_convex();
    // feasible segment is [1, inf); bound it for the oracle LP with x <= 3
    qp::QpInstance boxed = q;
    boxed.m = 2;
    boxed.D = Matrix(2, 1);
    boxed.D(0, 0) = 1.0;
    boxed.D(1, 0) = -1.0;
    boxed.d = {1.0, -3.0};
    qp::StationaryResult st = qp::stationary_point(boxed, {2.0});
    CHECK(st.converged);
    CHECK(st.triple.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(st.triple.lambda[0] == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("worked example from the interior descends to a vertex") {
    qp::StationaryResult st = qp::stationary_point(example1_qp(), {0.3});
    CHECK(st.converged);
    CHECK(st.triple.x[0] == doctest::Approx(0.0).epsilon(1e-8));
  }
  SUBCASE("PSD simplex QP reaches the global optimum") {
    Rng rng(5);
    qp::QpInstance base = gen::gen_stqp(10, 0.5, 42);
    // make it convex: Q <- G'G + I
    Matrix G(10, 10);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) G(i, j) = rng.uniform(-0.5, 0.5);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        double acc = i == j ? 1.0 : 0.0;
        for (int t = 0; t < 10; ++t) acc += G(t, i) * G(t, j);
        base.Q(i, j) = acc;
      }
    qp::StationaryResult st = qp::stationary_point(base, std::vector<double>(10, 0.1));
    REQUIRE(st.converged);
    oracle::GlobalResult g = oracle::enumerate_global(gen::stqp_to_lpcc(base));
    REQUIRE(g.feasible);
    // stqp LPCC objective equals q at KKT points
    CHECK(qp::objective(base, st.triple.x) == doctest::Approx(g.objective).epsilon(1e-7));
  }
}

TEST_CASE("multiplier recovery") {
  SUBCASE("active bound gets its gradient weight") {
    auto t = qp::recover_multipliers(one_d_convex(), {1.0});
    REQUIRE(t.has_value());
    CHECK(t->lambda[0] == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("interior stationary point has zero multipliers") {
    auto t = qp::recover_multipliers(example1_qp(), {0.5});
    REQUIRE(t.has_value());
    CHECK(t->lambda[0] == doctest::Approx(0.0));
    CHECK(t->lambda[1] == doctest::Approx(0.0));
  }
  SUBCASE("non-stationary points are reported, not fudged") {
    CHECK_FALSE(qp::recover_multipliers(one_d_convex(), {2.0}).has_value());
  }
  SUBCASE("stationarity residual stays small on random active-set instances") {
    Rng rng(9);
    for (int rep = 0; rep < 10; ++rep) {
      // x solves min q over the box [0,1]^3 at a random vertex by
      // construction: pick vertex v, set c = -Qv + r with r pointing
      // outward so v is stationary
      qp::QpInstance q;
      q.n = 3;
      q.m = 6;
      q.Q = Matrix(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          double v = rng.uniform(-0.5, 0.5);
          q.Q(i, j) = v;
          q.Q(j, i) = v;
        }
      q.D = Matrix(6, 3);
      q.d.assign(6, 0.0);
      for (int j = 0; j < 3; ++j) {
        q.D(j, j) = 1.0;           // x_j >= 0
        q.D(3 + j, j) = -1.0;      // x_j <= 1
        q.d[3 + j] = -1.0;
      }
      std::vector<double> vert(3);
      for (double& v : vert) v = rng.uniform01() < 0.5 ? 0.0 : 1.0;
      std::vector<double> Qv = matvec(q.Q, vert);
      q.c.assign(3, 0.0);
      for (int j = 0; j < 3; ++j) {
        double push = rng.uniform(0.1, 1.0);
        // gradient component must point into the active bound
        q.c[j] = -Qv[j] + (vert[j] == 0.0 ? push : -push);
      }
      auto t = qp::recover_multipliers(q, vert);
      REQUIRE(t.has_value());
      std::vector<double> g = qp::gradient(q, vert);
      std::vector<double> Dt(3, 0.0);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j) Dt[j] += q.D(i, j) * t->lambda[i];
      for (int j = 0; j < 3; ++j) CHECK(std::abs(g[j] - Dt[j]) <= 1e-8);
    }
  }
}

TEST_CASE("local-min certificate on the worked example") {
  qp::QpInstance q = example1_qp();
  SUBCASE("global minimizer certifies with the default partition") {
    CHECK(qp::local_min_certificate(q, 2.0, example1_kkt(0.0, 0.0, 0.5), tight()) ==
          qp::Certificate::certified);
  }
  SUBCASE("the interior maximizer is never certified") {
    CHECK(qp::local_min_certificate(q, 2.0, example1_kkt(0.5, 0.0, 0.0), tight()) ==
          qp::Certificate::not_certified);
  }
  SUBCASE("the other global minimizer certifies too") {
    CHECK(qp::local_min_certificate(q, 2.0, example1_kkt(1.0, 0.5, 0.0), tight()) ==
          qp::Certificate::certified);
  }
}

TEST_CASE("certificate with empty fixed sets certifies PSD KKT triples") {
  Rng rng(21);
  qp::QpInstance q;
  q.n = 3;
  q.m = 4;
  q.Q = Matrix(3, 3);
  Matrix G(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = i == j ? 0.5 : 0.0;
      for (int t = 0; t < 3; ++t) acc += G(t, i) * G(t, j);
      q.Q(i, j) = acc;
    }
  q.c = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  q.D = Matrix(4, 3);
  q.d.assign(4, 0.0);
  for (int j = 0; j < 3; ++j) q.D(j, j) = 1.0;
  for (int j = 0; j < 3; ++j) q.D(3, j) = -1.0;
  q.d[3] = -4.0;  // x >= 0, sum x <= 4
  model::LpccInstance inst = qp::to_lpcc(q, 100.0);
  oracle::GlobalResult g = oracle::enumerate_global(inst);
  REQUIRE(g.feasible);
  qp::KktTriple triple{g.triple.x, g.triple.y, g.triple.z};
  model::IndexPartition all_c;
  for (int i = 0; i < 4; ++i) all_c.m_c.push_back(i);
  CHECK(qp::local_min_certificate(q, 100.0, triple, all_c, tight()) ==
        qp::Certificate::certified);
}

TEST_CASE("convex-hull projection property of restricted optima") {
  // solve a restricted KKT problem to optimality, collect optimal pieces,
  // and check q(x*) <= q(x) over sampled hull points of their projections
  Rng rng(31);
  qp::QpInstance q;
  q.n = 2;
  q.m = 4;
  q.Q = Matrix(2, 2);
  q.Q(0, 0) = 1.0;
  q.Q(1, 1) = -1.0;  // indefinite
  q.c = {0.3, 0.2};
  q.D = Matrix(4, 2);
  q.d.assign(4, 0.0);
  q.D(0, 0) = 1.0;
  q.D(1, 1) = 1.0;
  q.D(2, 0) = -1.0;
  q.D(3, 1) = -1.0;
  q.d[2] = -1.0;
  q.d[3] = -1.0;  // box [0,1]^2
  model::LpccInstance inst = qp::to_lpcc(q, 20.0);
  oracle::GlobalResult g = oracle::enumerate_global(inst);
  REQUIRE(g.feasible);
  double opt = g.objective;
  // optimal pieces and their x projections
  std::vector<std::vector<double>> xs;
  for (std::uint64_t bits = 0; bits < 16; ++bits) {
    std::vector<uint8_t> side(4);
    for (int i = 0; i < 4; ++i) side[i] = static_cast<uint8_t>((bits >> i) & 1u);
    oracle::PieceResult piece = oracle::solve_piece(inst, side);
    if (piece.status == lp::LpStatus::optimal && piece.objective <= opt + 1e-9)
      xs.push_back(piece.triple.x);
  }
  REQUIRE(!xs.empty());
  double qstar = 0.5 * opt;  // l = 2q on KKT-feasible points
  for (int rep = 0; rep < 1000; ++rep) {
    // random convex combination
    std::vector<double> w(xs.size());
    double total = 0.0;
    for (double& v : w) {
      v = rng.uniform01();
      total += v;
    }
    std::vector<double> x(2, 0.0);
    for (size_t t = 0; t < xs.size(); ++t)
      for (int j = 0; j < 2; ++j) x[j] += w[t] / total * xs[t][j];
    CHECK(qp::objective(q, x) >= qstar - 1e-8);
  }
}

TEST_CASE("subspace refinement: convexity directions cannot improve q") {
  // Q is PSD on L = span(e0); from a KKT point, moving along L inside the
  // region never goes below q at the point
  qp::QpInstance q;
  q.n = 2;
  q.m = 4;
  q.Q = Matrix(2, 2);
  q.Q(0, 0) = 1.0;
  q.Q(1, 1) = -1.0;
  q.c = {0.0, 0.0};
  q.D = Matrix(4, 2);
  q.d.assign(4, 0.0);
  q.D(0, 0) = 1.0;
  q.D(1, 1) = 1.0;
  q.D(2, 0) = -1.0;
  q.D(3, 1) = -1.0;
  q.d[2] = -2.0;
  q.d[3] = -2.0;  // box [0,2]^2
  // x* = (0,0) is a KKT point (gradient 0)
  std::vector<double> xstar{0.0, 0.0};
  REQUIRE(qp::recover_multipliers(q, xstar).has_value());
  for (double t = 0.0; t <= 2.0; t += 0.05) {
    std::vector<double> x{t, 0.0};  // x* + t e0
    CHECK(qp::objective(q, x) >= qp::objective(q, xstar) - 1e-12);
  }
}

TEST_SUITE_END();
