// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "pipopt/bb.hpp"
#include "pipopt/model.hpp"

namespace pipopt::qp {

// minimize c'x + 1/2 x'Qx  subject to  Dx >= d
struct QpInstance {
  int n = 0, m = 0;
  Matrix Q;  // n x n symmetric
  std::vector<double> c;
  Matrix D;  // m x n
  std::vector<double> d;

  void validate() const;
};

struct KktTriple {
  std::vector<double> x, s, lambda;  // s = Dx - d
};

double objective(const QpInstance& qp, const std::vector<double>& x);
std::vector<double> gradient(const QpInstance& qp, const std::vector<double>& x);

// KKT-system LPCC: minimize c'x + d'lambda over Qx - D'lambda = -c,
// Dx - s = d, 0 <= s perp lambda >= 0. y carries s, z carries lambda.
model::LpccInstance to_lpcc(const QpInstance& qp, double big_m);

model::PointTriple to_lpcc_point(const QpInstance& qp, const KktTriple& t);
KktTriple from_lpcc_point(const model::PointTriple& pt);

// inverse of to_lpcc for role-tagged instances
QpInstance from_kkt_lpcc(const model::LpccInstance& inst);

struct StationaryResult {
  KktTriple triple;
  bool converged = false;
  double stationarity_residual = kInf;  // terminal linear-minimization gap
  int iterations = 0;
};

// Frank-Wolfe with away steps over {Dx >= d}; the linear-minimization
// oracle is an LP solve, so only a bounded nonempty polyhedron is needed.
StationaryResult stationary_point(const QpInstance& qp, const std::vector<double>& x0,
                                  double tol = 1e-8, int max_iter = 2000);

// Multipliers for the active rows at x via an elastic equality LP;
// nullopt when x is not stationary at the given tolerance.
std::optional<KktTriple> recover_multipliers(const QpInstance& qp, const std::vector<double>& x,
                                             double active_tol = 1e-6);

enum class Certificate { certified, not_certified, indeterminate };

// M_lambda+ maximal over positive multipliers, M_s+ empty.
model::IndexPartition default_certificate_partition(const KktTriple& triple,
                                                    double tol = kPositiveTol);

// Solves the relaxed restricted-KKT model built from `part` to proven
// optimality; certified when the triple's l-value matches the optimum.
// The default partition (maximal multiplier set, empty slack set) is the
// tightest legal relaxation.
Certificate local_min_certificate(const QpInstance& qp, double big_m, const KktTriple& triple,
                                  const model::IndexPartition& part, const bb::BbConfig& engine);
Certificate local_min_certificate(const QpInstance& qp, double big_m, const KktTriple& triple,
                                  const bb::BbConfig& engine);

}  // namespace pipopt::qp
