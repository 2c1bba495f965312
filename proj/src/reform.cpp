// SPDX-License-Identifier: Apache-2.0
#include "pipopt/reform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace pipopt::reform {

int MilpModel::num_binaries() const {
  int count = 0;
  for (const MilpColumn& c : cols)
    if (c.kind == VarKind::binary) ++count;
  return count;
}

void MilpModel::validate() const {
  if (objective.size() != cols.size()) throw Error("MilpModel: objective length mismatch");
  for (const MilpColumn& c : cols) {
    if (c.lower > c.upper) throw Error("MilpModel: crossed bounds");
    if (c.kind == VarKind::binary && (c.lower < 0.0 || c.upper > 1.0))
      throw Error("MilpModel: binary column must live in [0,1]");
  }
  for (const MilpRow& r : rows) {
    if (r.cols.size() != r.coefs.size()) throw Error("MilpModel: row arrays out of sync");
    for (int j : r.cols)
      if (j < 0 || j >= static_cast<int>(cols.size()))
        throw Error("MilpModel: row references unknown column");
  }
  auto check_map = [&](const std::vector<int>& map, ColRole role) {
    for (size_t i = 0; i < map.size(); ++i) {
      if (map[i] < 0) continue;
      const MilpColumn& c = cols[map[i]];
      if (c.role != role || c.role_index != static_cast<int>(i))
        throw Error("MilpModel: role metadata is not a bijection");
    }
  };
  check_map(x_col, ColRole::x);
  check_map(y_col, ColRole::y);
  check_map(z_col, ColRole::z);
  check_map(w_col, ColRole::w);
}

double MilpModel::objective_value(const std::vector<double>& values) const {
  double acc = 0.0;
  for (size_t j = 0; j < cols.size(); ++j) acc += objective[j] * values[j];
  return acc;
}

double MilpModel::solution_violation(const std::vector<double>& values) const {
  if (values.size() != cols.size()) throw Error("MilpModel: solution length mismatch");
  double worst = 0.0;
  for (size_t j = 0; j < cols.size(); ++j) {
    worst = std::max(worst, cols[j].lower - values[j]);
    worst = std::max(worst, values[j] - cols[j].upper);
    if (cols[j].kind == VarKind::binary)
      worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  for (const MilpRow& r : rows) {
    double acc = 0.0;
    for (size_t t = 0; t < r.cols.size(); ++t) acc += r.coefs[t] * values[r.cols[t]];
    switch (r.sense) {
      case RowSense::eq: worst = std::max(worst, std::abs(acc - r.rhs)); break;
      case RowSense::le: worst = std::max(worst, acc - r.rhs); break;
      case RowSense::ge: worst = std::max(worst, r.rhs - acc); break;
    }
  }
  return worst;
}

namespace {

std::string tag(const char* base, int i) { return std::string(base) + std::to_string(i); }

// shared scaffolding: x, y, z columns plus the equality block
MilpModel base_model(const model::LpccInstance& inst) {
  inst.validate();
  MilpModel mm;
  mm.n_x = inst.n;
  mm.n_pairs = inst.m;
  mm.x_col.assign(inst.n, -1);
  mm.y_col.assign(inst.m, -1);
  mm.z_col.assign(inst.m, -1);
  mm.w_col.assign(inst.m, -1);

  auto add_col = [&](MilpColumn c, double obj) {
    mm.cols.push_back(std::move(c));
    mm.objective.push_back(obj);
    return static_cast<int>(mm.cols.size()) - 1;
  };

  for (int j = 0; j < inst.n; ++j)
    mm.x_col[j] = add_col({tag("x", j), inst.x_lower[j], inst.x_upper[j], VarKind::continuous,
                           ColRole::x, j, true},
                          inst.c[j]);
  for (int i = 0; i < inst.m; ++i)
    mm.y_col[i] = add_col(
        {tag("y", i), 0.0, inst.y_bound(i), VarKind::continuous, ColRole::y, i, true}, inst.e[i]);
  for (int i = 0; i < inst.m; ++i)
    mm.z_col[i] = add_col(
        {tag("z", i), 0.0, inst.z_bound(i), VarKind::continuous, ColRole::z, i, true}, inst.f[i]);

  for (int r = 0; r < inst.k; ++r) {
    MilpRow row;
    row.name = tag("eq", r);
    row.sense = RowSense::eq;
    row.rhs = inst.b[r];
    for (int j = 0; j < inst.n; ++j)
      if (inst.A(r, j) != 0.0) {
        row.cols.push_back(mm.x_col[j]);
        row.coefs.push_back(inst.A(r, j));
      }
    for (int i = 0; i < inst.m; ++i)
      if (inst.B(r, i) != 0.0) {
        row.cols.push_back(mm.y_col[i]);
        row.coefs.push_back(inst.B(r, i));
      }
    for (int i = 0; i < inst.m; ++i)
      if (inst.C(r, i) != 0.0) {
        row.cols.push_back(mm.z_col[i]);
        row.coefs.push_back(inst.C(r, i));
      }
    mm.rows.push_back(std::move(row));
  }
  return mm;
}

// y_i <= U_y w_i and z_i <= U_z (1 - w_i)
void add_pair_binary(MilpModel& mm, const model::LpccInstance& inst, int i) {
  MilpColumn wc{tag("w", i), 0.0, 1.0, VarKind::binary, ColRole::w, i, true};
  mm.cols.push_back(std::move(wc));
  mm.objective.push_back(0.0);
  int w = static_cast<int>(mm.cols.size()) - 1;
  mm.w_col[i] = w;

  MilpRow up_y;
  up_y.name = tag("indy", i);
  up_y.sense = RowSense::le;
  up_y.rhs = 0.0;
  up_y.cols = {mm.y_col[i], w};
  up_y.coefs = {1.0, -inst.y_bound(i)};
  mm.rows.push_back(std::move(up_y));

  MilpRow up_z;
  up_z.name = tag("indz", i);
  up_z.sense = RowSense::le;
  up_z.rhs = inst.z_bound(i);
  up_z.cols = {mm.z_col[i], w};
  up_z.coefs = {1.0, inst.z_bound(i)};
  mm.rows.push_back(std::move(up_z));
}

}  // namespace

MilpModel build_full_milp(const model::LpccInstance& inst) {
  MilpModel mm = base_model(inst);
  for (int i = 0; i < inst.m; ++i) add_pair_binary(mm, inst, i);
  mm.validate();
  return mm;
}

MilpModel build_partial_milp(const model::LpccInstance& inst, const model::IndexPartition& part) {
  part.validate(inst.m);
  MilpModel mm = base_model(inst);
  for (int i : part.m_y_plus) mm.cols[mm.z_col[i]].upper = 0.0;  // z_i = 0, y_i free
  for (int i : part.m_z_plus) mm.cols[mm.y_col[i]].upper = 0.0;  // y_i = 0, z_i free
  for (int i : part.m_c) add_pair_binary(mm, inst, i);
  mm.validate();
  return mm;
}

static void require_kkt_roles(const model::LpccInstance& inst) {
  if (inst.kind != model::InstanceKind::qp_kkt && inst.kind != model::InstanceKind::stqp_kkt)
    throw Error("restricted-KKT builder needs a KKT-role-tagged instance");
}

MilpModel build_restricted_kkt_milp(const model::LpccInstance& qp_lpcc,
                                    const model::IndexPartition& part) {
  require_kkt_roles(qp_lpcc);
  return build_partial_milp(qp_lpcc, part);
}

MilpModel build_relaxed_restricted_kkt(const model::LpccInstance& qp_lpcc,
                                       const model::IndexPartition& part) {
  require_kkt_roles(qp_lpcc);
  part.validate(qp_lpcc.m);
  MilpModel mm = base_model(qp_lpcc);
  // m_z_plus plays M_lambda+: slack fixed at zero, multiplier free
  for (int i : part.m_z_plus) {
    mm.cols[mm.y_col[i]].upper = 0.0;
    mm.cols[mm.z_col[i]].lower = -kInf;
    mm.cols[mm.z_col[i]].upper = kInf;
  }
  // m_y_plus plays M_s+: both sides nonnegative, no complementarity, no
  // binary; upper bounds dropped so the relaxation is not cut
  for (int i : part.m_y_plus) {
    mm.cols[mm.y_col[i]].upper = kInf;
    mm.cols[mm.z_col[i]].upper = kInf;
  }
  for (int i : part.m_c) add_pair_binary(mm, qp_lpcc, i);
  mm.validate();
  return mm;
}

model::PointTriple extract_triple(const MilpModel& mm, const ModelSolution& sol) {
  if (sol.values.size() != mm.cols.size()) throw Error("extract_triple: solution length mismatch");
  model::PointTriple pt;
  pt.x.assign(mm.n_x, 0.0);
  pt.y.assign(mm.n_pairs, 0.0);
  pt.z.assign(mm.n_pairs, 0.0);
  for (int j = 0; j < mm.n_x; ++j) {
    if (mm.x_col[j] < 0) throw Error("extract_triple: missing x role");
    pt.x[j] = sol.values[mm.x_col[j]];
  }
  for (int i = 0; i < mm.n_pairs; ++i) {
    if (mm.y_col[i] < 0 || mm.z_col[i] < 0) throw Error("extract_triple: missing pair role");
    pt.y[i] = sol.values[mm.y_col[i]];
    pt.z[i] = sol.values[mm.z_col[i]];
  }
  return pt;
}

ModelSolution embed_triple(const MilpModel& mm, const model::PointTriple& pt, double tol) {
  if (static_cast<int>(pt.x.size()) != mm.n_x || static_cast<int>(pt.y.size()) != mm.n_pairs ||
      static_cast<int>(pt.z.size()) != mm.n_pairs)
    throw Error("embed_triple: triple does not match the model roles");
  ModelSolution sol;
  sol.values.assign(mm.cols.size(), 0.0);
  for (int j = 0; j < mm.n_x; ++j) sol.values[mm.x_col[j]] = pt.x[j];
  for (int i = 0; i < mm.n_pairs; ++i) {
    sol.values[mm.y_col[i]] = pt.y[i];
    sol.values[mm.z_col[i]] = pt.z[i];
    int w = mm.w_col[i];
    if (w >= 0) {
      bool y_open = pt.y[i] > tol;  // degenerate pairs close the y side
      bool one_means_open_y = mm.cols[w].w_opens_y;
      sol.values[w] = (y_open == one_means_open_y) ? 1.0 : 0.0;
    }
  }
  sol.objective = mm.objective_value(sol.values);
  return sol;
}

void write_lp_format(const MilpModel& mm, std::ostream& out) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "\\ LP export\nMinimize\n obj:";
  bool first = true;
  for (size_t j = 0; j < mm.cols.size(); ++j) {
    if (mm.objective[j] == 0.0) continue;
    out << (first ? " " : " + ") << num(mm.objective[j]) << " " << mm.cols[j].name;
    first = false;
  }
  if (first) out << " 0 " << (mm.cols.empty() ? "x0" : mm.cols[0].name);
  out << "\nSubject To\n";
  for (const MilpRow& r : mm.rows) {
    out << " " << r.name << ":";
    for (size_t t = 0; t < r.cols.size(); ++t)
      out << (t == 0 ? " " : " + ") << num(r.coefs[t]) << " " << mm.cols[r.cols[t]].name;
    switch (r.sense) {
      case RowSense::eq: out << " = "; break;
      case RowSense::le: out << " <= "; break;
      case RowSense::ge: out << " >= "; break;
    }
    out << num(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const MilpColumn& c : mm.cols) {
    if (c.kind == VarKind::binary) continue;
    if (c.lower == -kInf && c.upper == kInf)
      out << " " << c.name << " free\n";
    else if (c.lower == -kInf)
      out << " -inf <= " << c.name << " <= " << num(c.upper) << "\n";
    else if (c.upper == kInf)
      out << " " << num(c.lower) << " <= " << c.name << "\n";
    else
      out << " " << num(c.lower) << " <= " << c.name << " <= " << num(c.upper) << "\n";
  }
  bool any_bin = false;
  for (const MilpColumn& c : mm.cols)
    if (c.kind == VarKind::binary) {
      if (!any_bin) out << "Binaries\n";
      any_bin = true;
      out << " " << c.name;
    }
  if (any_bin) out << "\n";
  out << "End\n";
}

std::string to_lp_format(const MilpModel& mm) {
  std::ostringstream ss;
  write_lp_format(mm, ss);
  return ss.str();
}

}  // namespace pipopt::reform
