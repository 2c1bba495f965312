// SPDX-License-Identifier: Apache-2.0
#include "pipopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace pipopt::model {

using nlohmann::json;

const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::generic: return "generic";
    case InstanceKind::qp_kkt: return "qp_kkt";
    case InstanceKind::stqp_kkt: return "stqp_kkt";
    case InstanceKind::inv_qp: return "inv_qp";
  }
  return "generic";
}

InstanceKind instance_kind_from_string(const std::string& s) {
  if (s == "generic") return InstanceKind::generic;
  if (s == "qp_kkt") return InstanceKind::qp_kkt;
  if (s == "stqp_kkt") return InstanceKind::stqp_kkt;
  if (s == "inv_qp") return InstanceKind::inv_qp;
  throw Error("unknown instance kind: " + s);
}

void finalize_bounds(LpccInstance& inst) {
  if (inst.x_lower.empty()) inst.x_lower.assign(inst.n, -kInf);
  if (inst.x_upper.empty()) inst.x_upper.assign(inst.n, kInf);
  if (inst.y_upper.empty()) inst.y_upper.assign(inst.m, inst.big_m);
  if (inst.z_upper.empty()) inst.z_upper.assign(inst.m, inst.big_m);
}

void LpccInstance::validate() const {
  auto fail = [](const std::string& msg) { throw Error("LpccInstance: " + msg); };
  if (n < 0 || m < 0 || k < 0) fail("negative dimension");
  if (static_cast<int>(c.size()) != n) fail("c has wrong length");
  if (static_cast<int>(e.size()) != m) fail("e has wrong length");
  if (static_cast<int>(f.size()) != m) fail("f has wrong length");
  if (A.rows() != k || A.cols() != n) fail("A has wrong shape");
  if (B.rows() != k || B.cols() != m) fail("B has wrong shape");
  if (C.rows() != k || C.cols() != m) fail("C has wrong shape");
  if (static_cast<int>(b.size()) != k) fail("b has wrong length");
  if (!(big_m > 0.0) || !std::isfinite(big_m)) fail("big_m must be a positive finite scalar");
  for (double v : c)
    if (!std::isfinite(v)) fail("c has a non-finite entry");
  for (double v : e)
    if (!std::isfinite(v)) fail("e has a non-finite entry");
  for (double v : f)
    if (!std::isfinite(v)) fail("f has a non-finite entry");
  for (double v : b)
    if (!std::isfinite(v)) fail("b has a non-finite entry");
  if (!A.all_finite() || !B.all_finite() || !C.all_finite()) fail("matrix has a non-finite entry");
  if (static_cast<int>(x_lower.size()) != n || static_cast<int>(x_upper.size()) != n)
    fail("x bounds have wrong length");
  if (static_cast<int>(y_upper.size()) != m || static_cast<int>(z_upper.size()) != m)
    fail("y/z bounds have wrong length");
  for (int j = 0; j < n; ++j)
    if (x_lower[j] > x_upper[j]) fail("x bounds crossed");
  for (int i = 0; i < m; ++i)
    if (!(y_upper[i] > 0.0) || !(z_upper[i] > 0.0)) fail("y/z upper bound must be positive");
}

void IndexPartition::validate(int m) const {
  std::vector<int> count(m, 0);
  auto tally = [&](const std::vector<int>& set, const char* name) {
    for (int i : set) {
      if (i < 0 || i >= m) throw Error(std::string("IndexPartition: index out of range in ") + name);
      ++count[i];
    }
  };
  tally(m_c, "m_c");
  tally(m_y_plus, "m_y_plus");
  tally(m_z_plus, "m_z_plus");
  for (int i = 0; i < m; ++i)
    if (count[i] != 1) throw Error("IndexPartition: sets do not partition {1..m}");
}

static void require_dims(const LpccInstance& inst, const PointTriple& pt) {
  if (static_cast<int>(pt.x.size()) != inst.n || static_cast<int>(pt.y.size()) != inst.m ||
      static_cast<int>(pt.z.size()) != inst.m)
    throw Error("PointTriple dimensions do not match the instance");
}

double evaluate_objective(const LpccInstance& inst, const PointTriple& pt) {
  require_dims(inst, pt);
  return dot(inst.c, pt.x) + dot(inst.e, pt.y) + dot(inst.f, pt.z);
}

FeasibilityReport check_feasible(const LpccInstance& inst, const PointTriple& pt, double tol) {
  require_dims(inst, pt);
  if (tol < 0) throw Error("check_feasible: tol must be nonnegative");
  FeasibilityReport rep;
  std::vector<double> res(inst.k, 0.0);
  matvec_add(inst.A, pt.x, res);
  matvec_add(inst.B, pt.y, res);
  matvec_add(inst.C, pt.z, res);
  for (int r = 0; r < inst.k; ++r) rep.eq_residual = std::max(rep.eq_residual, std::abs(res[r] - inst.b[r]));
  for (int i = 0; i < inst.m; ++i) {
    rep.nonneg_violation = std::max(rep.nonneg_violation, -std::min(pt.y[i], pt.z[i]));
    rep.comp_violation = std::max(rep.comp_violation, std::min(pt.y[i], pt.z[i]));
    rep.bound_violation = std::max(rep.bound_violation, pt.y[i] - inst.y_bound(i));
    rep.bound_violation = std::max(rep.bound_violation, pt.z[i] - inst.z_bound(i));
  }
  rep.nonneg_violation = std::max(rep.nonneg_violation, 0.0);
  rep.comp_violation = std::max(rep.comp_violation, 0.0);
  rep.bound_violation = std::max(rep.bound_violation, 0.0);
  return rep;
}

namespace {

// indices of the floor(p * |positives|) largest entries, ties to lowest index
std::vector<int> largest_positive(const std::vector<double>& v, double p, double tol,
                                  const std::vector<char>& taken) {
  std::vector<int> pos;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i] > tol) pos.push_back(i);
  // cardinality from the full positive set; selection skips taken indices
  int want = static_cast<int>(std::floor(p * static_cast<double>(pos.size()) + 1e-9));
  std::stable_sort(pos.begin(), pos.end(), [&](int a, int b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });
  std::vector<int> out;
  for (int i : pos) {
    if (static_cast<int>(out.size()) >= want) break;
    if (!taken[i]) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

IndexPartition complement_partition(const PointTriple& pt, double p, double tol) {
  if (p < 0.0 || p > 1.0) throw Error("complement_partition: p must lie in [0,1]");
  const int m = static_cast<int>(pt.y.size());
  if (static_cast<int>(pt.z.size()) != m) throw Error("complement_partition: y/z length mismatch");
  IndexPartition part;
  std::vector<char> taken(m, 0);
  part.m_y_plus = largest_positive(pt.y, p, tol, taken);
  for (int i : part.m_y_plus) taken[i] = 1;
  part.m_z_plus = largest_positive(pt.z, p, tol, taken);
  for (int i : part.m_z_plus) taken[i] = 1;
  for (int i = 0; i < m; ++i)
    if (!taken[i]) part.m_c.push_back(i);
  return part;
}

namespace {

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (int r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, int rows, int cols, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw Error(std::string("instance json: ") + name + " has wrong row count");
  Matrix M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw Error(std::string("instance json: ") + name + " has wrong column count");
    for (int c = 0; c < cols; ++c) M(r, c) = row[c].get<double>();
  }
  return M;
}

std::vector<double> vec_from_json(const json& j, int len, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    throw Error(std::string("instance json: ") + name + " has wrong length");
  std::vector<double> v(len);
  for (int i = 0; i < len; ++i) v[i] = j[i].get<double>();
  return v;
}

// +/-inf encoded as strings so the file stays valid JSON
json bound_vec_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) {
    if (x == kInf)
      arr.push_back("inf");
    else if (x == -kInf)
      arr.push_back("-inf");
    else
      arr.push_back(x);
  }
  return arr;
}

std::vector<double> bound_vec_from_json(const json& j, int len, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    throw Error(std::string("instance json: ") + name + " has wrong length");
  std::vector<double> v(len);
  for (int i = 0; i < len; ++i) {
    if (j[i].is_string()) {
      std::string s = j[i].get<std::string>();
      if (s == "inf")
        v[i] = kInf;
      else if (s == "-inf")
        v[i] = -kInf;
      else
        throw Error(std::string("instance json: bad bound token in ") + name);
    } else {
      v[i] = j[i].get<double>();
    }
  }
  return v;
}

}  // namespace

std::string to_json(const LpccInstance& inst) {
  inst.validate();
  json j;
  j["format"] = "lpcc-1";
  j["kind"] = to_string(inst.kind);
  j["n"] = inst.n;
  j["m"] = inst.m;
  j["k"] = inst.k;
  j["c"] = inst.c;
  j["e"] = inst.e;
  j["f"] = inst.f;
  j["A"] = matrix_to_json(inst.A);
  j["B"] = matrix_to_json(inst.B);
  j["C"] = matrix_to_json(inst.C);
  j["b"] = inst.b;
  j["big_m"] = inst.big_m;
  j["x_lower"] = bound_vec_to_json(inst.x_lower);
  j["x_upper"] = bound_vec_to_json(inst.x_upper);
  j["y_upper"] = inst.y_upper;
  j["z_upper"] = inst.z_upper;
  if (!inst.metadata.empty()) j["metadata"] = inst.metadata;
  return j.dump(1);
}

LpccInstance from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& ex) {
    throw Error(std::string("instance json: parse failure: ") + ex.what());
  }
  if (!j.contains("format") || j["format"].get<std::string>() != "lpcc-1")
    throw Error("instance json: missing or unsupported format tag (want \"lpcc-1\")");
  LpccInstance inst;
  inst.n = j.at("n").get<int>();
  inst.m = j.at("m").get<int>();
  inst.k = j.at("k").get<int>();
  inst.kind = j.contains("kind") ? instance_kind_from_string(j["kind"].get<std::string>())
                                 : InstanceKind::generic;
  inst.c = vec_from_json(j.at("c"), inst.n, "c");
  inst.e = vec_from_json(j.at("e"), inst.m, "e");
  inst.f = vec_from_json(j.at("f"), inst.m, "f");
  inst.A = matrix_from_json(j.at("A"), inst.k, inst.n, "A");
  inst.B = matrix_from_json(j.at("B"), inst.k, inst.m, "B");
  inst.C = matrix_from_json(j.at("C"), inst.k, inst.m, "C");
  inst.b = vec_from_json(j.at("b"), inst.k, "b");
  inst.big_m = j.at("big_m").get<double>();
  if (j.contains("x_lower")) inst.x_lower = bound_vec_from_json(j["x_lower"], inst.n, "x_lower");
  if (j.contains("x_upper")) inst.x_upper = bound_vec_from_json(j["x_upper"], inst.n, "x_upper");
  if (j.contains("y_upper")) inst.y_upper = vec_from_json(j["y_upper"], inst.m, "y_upper");
  if (j.contains("z_upper")) inst.z_upper = vec_from_json(j["z_upper"], inst.m, "z_upper");
  finalize_bounds(inst);
  if (j.contains("metadata"))
    for (auto& [key, val] : j["metadata"].items()) inst.metadata[key] = val.get<std::string>();
  inst.validate();
  return inst;
}

void save_instance(const LpccInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << to_json(inst) << "\n";
}

LpccInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace pipopt::model
