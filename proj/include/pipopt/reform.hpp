// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pipopt/model.hpp"

namespace pipopt::reform {

enum class VarKind : uint8_t { continuous, binary };
enum class RowSense : uint8_t { eq, le, ge };
enum class ColRole : uint8_t { x, y, z, w, aux };

struct MilpColumn {
  std::string name;
  double lower = 0.0, upper = kInf;
  VarKind kind = VarKind::continuous;
  ColRole role = ColRole::aux;
  int role_index = -1;
  // for role w: true when value 1 leaves the y side open (z forced to 0)
  bool w_opens_y = true;
};

struct MilpRow {
  std::string name;
  std::vector<int> cols;
  std::vector<double> coefs;
  RowSense sense = RowSense::eq;
  double rhs = 0.0;
};

// One mixed-binary model type serves the full, partial, restricted-KKT and
// relaxed builders; role metadata maps columns back to LPCC blocks.
struct MilpModel {
  std::vector<MilpColumn> cols;
  std::vector<MilpRow> rows;
  std::vector<double> objective;  // minimize

  int n_x = 0;      // x role extent
  int n_pairs = 0;  // y/z role extent

  std::vector<int> x_col, y_col, z_col, w_col;  // role_index -> column, -1 if absent

  int num_binaries() const;
  void validate() const;
  double objective_value(const std::vector<double>& values) const;
  // max violation over rows, column bounds and integrality
  double solution_violation(const std::vector<double>& values) const;
};

struct ModelSolution {
  std::vector<double> values;
  double objective = 0.0;
};

MilpModel build_full_milp(const model::LpccInstance& inst);
MilpModel build_partial_milp(const model::LpccInstance& inst, const model::IndexPartition& part);

// Partial MILP of a QP-derived KKT system; requires role-tagged instances
// (y = slack block, z = multiplier block). m_y_plus plays M_s+, m_z_plus
// plays M_lambda+.
MilpModel build_restricted_kkt_milp(const model::LpccInstance& qp_lpcc,
                                    const model::IndexPartition& part);

// Relaxation used by the QP local-minimality certificate: multipliers on
// M_lambda+ become free with the slack fixed at zero; pairs on M_s+ lose
// both the complementarity row and the binary.
MilpModel build_relaxed_restricted_kkt(const model::LpccInstance& qp_lpcc,
                                       const model::IndexPartition& part);

model::PointTriple extract_triple(const MilpModel& model, const ModelSolution& sol);

// Inverse of extract_triple for feasible triples: continuous roles copied,
// binaries set to the side the triple occupies (degenerate pairs close the
// y side by convention).
ModelSolution embed_triple(const MilpModel& model, const model::PointTriple& pt,
                           double tol = kPositiveTol);

// CPLEX-style LP text export, 17 significant digits.
void write_lp_format(const MilpModel& model, std::ostream& out);
std::string to_lp_format(const MilpModel& model);

}  // namespace pipopt::reform
