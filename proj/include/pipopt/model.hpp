// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pipopt/common.hpp"

namespace pipopt::model {

enum class InstanceKind { generic, qp_kkt, stqp_kkt, inv_qp };

const char* to_string(InstanceKind k);
InstanceKind instance_kind_from_string(const std::string& s);

// Problem data for
//   minimize   c'x + e'y + f'z
//   subject to Ax + By + Cz = b,  0 <= y perp z >= 0,
// with y_i, z_i <= big_m over the feasible set, optional boxes on x and
// optional per-pair refinements of the y/z upper bounds.
struct LpccInstance {
  int n = 0;  // x variables
  int m = 0;  // complementarity pairs
  int k = 0;  // equality rows

  std::vector<double> c, e, f;  // n, m, m
  Matrix A, B, C;               // k x n, k x m, k x m
  std::vector<double> b;        // k
  double big_m = 0.0;

  std::vector<double> x_lower, x_upper;  // size n (defaults -inf / +inf)
  std::vector<double> y_upper, z_upper;  // size m (defaults big_m)

  InstanceKind kind = InstanceKind::generic;
  std::map<std::string, std::string> metadata;

  // effective upper bounds used by feasibility checks and MILP rows
  double y_bound(int i) const { return std::min(big_m, y_upper[i]); }
  double z_bound(int i) const { return std::min(big_m, z_upper[i]); }

  void validate() const;  // throws Error on inconsistent data
};

// fills the default bound vectors for an instance whose core fields are set
void finalize_bounds(LpccInstance& inst);

struct PointTriple {
  std::vector<double> x, y, z;
};

// Disjoint index sets covering {0..m-1}. m_y_plus / m_z_plus select pairs
// whose y / z side stays open; m_c keeps complementarity.
struct IndexPartition {
  std::vector<int> m_c, m_y_plus, m_z_plus;  // sorted ascending

  void validate(int m) const;  // disjoint cover of {0..m-1}
};

struct FeasibilityReport {
  double eq_residual = 0.0;       // max |Ax + By + Cz - b|
  double nonneg_violation = 0.0;  // max(0, -min(y,z))
  double comp_violation = 0.0;    // max_i min(y_i, z_i)
  double bound_violation = 0.0;   // max excess of (y,z) over their bounds

  bool within(double tol) const {
    return eq_residual <= tol && nonneg_violation <= tol && comp_violation <= tol &&
           bound_violation <= tol;
  }
};

double evaluate_objective(const LpccInstance& inst, const PointTriple& pt);

FeasibilityReport check_feasible(const LpccInstance& inst, const PointTriple& pt, double tol);

// Index sets sized floor(p * #positives) per side, members taken largest
// first, ties to the lowest index. Degenerate pairs always land in m_c.
IndexPartition complement_partition(const PointTriple& pt, double p, double tol = kPositiveTol);

// serialization (self-describing JSON, dense row-major matrices)
std::string to_json(const LpccInstance& inst);
LpccInstance from_json(const std::string& text);
void save_instance(const LpccInstance& inst, const std::string& path);
LpccInstance load_instance(const std::string& path);

}  // namespace pipopt::model
