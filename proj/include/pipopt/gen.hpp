// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "pipopt/model.hpp"
#include "pipopt/qp.hpp"
#include "pipopt/reform.hpp"

namespace pipopt::gen {

// ---- standard QP over the unit simplex ----

// random symmetric Q, density rho on the off-diagonal, c = 0; feasible
// region is the unit simplex encoded as paired inequalities plus x >= 0
qp::QpInstance gen_stqp(int n, double rho, std::uint64_t seed);

bool is_stqp(const qp::QpInstance& qp);

// KKT-system LPCC with the simplex equality kept native: pairs (x_j,
// lambda_j), free multiplier mu in the x block, objective (c'x + mu)/2
model::LpccInstance stqp_to_lpcc(const qp::QpInstance& stqp);

// MILP with rows Qx + c - lambda - mu*1 = 0, sum x = 1,
// 0 <= lambda_j <= M z_j, 0 <= x_j <= 1 - z_j, z binary,
// M = 2 n max|Q_ij|, objective (c'x + mu)/2
reform::MilpModel stqp_to_milp(const qp::QpInstance& stqp);

double stqp_big_m(const qp::QpInstance& stqp);

// inverse of stqp_to_lpcc for role-tagged instances
qp::QpInstance stqp_from_lpcc(const model::LpccInstance& inst);

// ---- quadratic assignment ----

struct QapData {
  int n = 0;
  Matrix F, D;  // flow, distance
};

// whitespace-separated: n, then n^2 flow entries row-major, then n^2
// distance entries
QapData parse_qaplib(const std::string& text);
QapData load_qaplib(const std::string& path);

// perm[i] = assigned location of facility i (0-based)
double qap_objective_of_permutation(const QapData& qap, const std::vector<int>& perm);

// concave QP over the assignment polytope: Q = sym(S) - alpha I with
// alpha = max absolute row sum of sym(S) + margin
struct QapQp {
  qp::QpInstance qp;
  double alpha = 0.0;
};
QapQp qap_to_qp(const QapData& qap, double margin);

// KKT LPCC of the lift; x-nonnegativity pairs come last
model::LpccInstance qap_lift_lpcc(const QapData& qap, double margin, double* alpha_out = nullptr,
                                  std::vector<int>* x_pair_indices = nullptr);

// ---- inverse convex QP ----

struct InvQpTargets {
  std::vector<double> hat_c, hat_d, hat_x;
};

struct InvQpInstance {
  model::LpccInstance lpcc;
  InvQpTargets targets;
  int n = 0, m = 0;
  // feasible point built from the generator's KKT-consistent sample;
  // deviation 0 when perturbation = 0
  model::PointTriple seed;
};

// Eq-(4)-style LPCC over decision block (c, d, x, t+, t-) with pairs
// (s, lambda); perturbation 0 leaves the targets exactly KKT-consistent,
// so the optimum is 0
InvQpInstance gen_invqp(int m, int n, std::uint64_t seed, double sparsity = 0.5,
                        double perturbation = 0.5);

// l1 deviation of (c,d,x) from the targets, recomputed from a triple
double invqp_l1_deviation(const InvQpInstance& inst, const model::PointTriple& pt);

}  // namespace pipopt::gen
