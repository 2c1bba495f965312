// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pipopt/lp.hpp"
#include "pipopt/model.hpp"

namespace pipopt::oracle {

struct GlobalResult {
  bool feasible = false;
  double objective = kInf;
  model::PointTriple triple;
  // side per pair: 0 keeps y open (z = 0), 1 keeps z open (y = 0);
  // unscoped pairs report 2 (complementarity dropped)
  std::vector<uint8_t> pattern;
  std::uint64_t patterns_tried = 0;
};

// Exact LPCC optimum by complementarity-pattern enumeration (2^|scope| LPs,
// warm-started along a Gray-code walk). With an explicit scope the pairs
// outside it keep both sides nonnegative WITHOUT complementarity, i.e. the
// result is a relaxation unless those pairs have forced-zero slacks.
GlobalResult enumerate_global(const model::LpccInstance& inst,
                              const std::optional<std::vector<int>>& pattern_scope = std::nullopt,
                              int num_threads = 1);

// LP over one complementarity piece. side[i]: 0 -> z_i = 0, 1 -> y_i = 0,
// 2 -> both sides free (no complementarity).
struct PieceResult {
  lp::LpStatus status = lp::LpStatus::infeasible;
  double objective = kInf;
  model::PointTriple triple;
};
PieceResult solve_piece(const model::LpccInstance& inst, const std::vector<uint8_t>& side);

// Local minimality by enumerating the 2^delta pieces containing the triple
// (delta = degenerate pairs). Exact for linear objectives on polyhedra.
bool verify_local_min(const model::LpccInstance& inst, const model::PointTriple& triple,
                      double tol = kPositiveTol);

}  // namespace pipopt::oracle
