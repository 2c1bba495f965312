// SPDX-License-Identifier: Apache-2.0
#include "pipopt/gen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pipopt::gen {

qp::QpInstance gen_stqp(int n, double rho, std::uint64_t seed) {
  if (n < 2) throw Error("gen_stqp: n must be at least 2");
  if (!(rho > 0.0 && rho < 1.0)) throw Error("gen_stqp: rho must lie in (0,1)");
  Rng rng(seed);
  qp::QpInstance inst;
  inst.n = n;
  inst.m = n + 2;
  inst.Q = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    inst.Q(i, i) = rng.uniform(-1.0, 1.0);
    for (int j = i + 1; j < n; ++j) {
      double v = rng.uniform(-1.0, 1.0);
      if (rng.uniform01() > rho) v = 0.0;  // density control
      inst.Q(i, j) = v;
      inst.Q(j, i) = v;
    }
  }
  inst.c.assign(n, 0.0);
  // simplex as paired inequalities plus x >= 0
  inst.D = Matrix(n + 2, n);
  inst.d.assign(n + 2, 0.0);
  for (int j = 0; j < n; ++j) {
    inst.D(0, j) = 1.0;
    inst.D(1, j) = -1.0;
    inst.D(2 + j, j) = 1.0;
  }
  inst.d[0] = 1.0;
  inst.d[1] = -1.0;
  inst.validate();
  return inst;
}

bool is_stqp(const qp::QpInstance& q) {
  if (q.m != q.n + 2) return false;
  for (int j = 0; j < q.n; ++j) {
    if (q.D(0, j) != 1.0 || q.D(1, j) != -1.0) return false;
    for (int i = 0; i < q.n; ++i)
      if (q.D(2 + i, j) != (i == j ? 1.0 : 0.0)) return false;
  }
  return q.d[0] == 1.0 && q.d[1] == -1.0 &&
         std::all_of(q.d.begin() + 2, q.d.end(), [](double v) { return v == 0.0; });
}

double stqp_big_m(const qp::QpInstance& stqp) {
  double qmax = 0.0;
  for (double v : stqp.Q.data()) qmax = std::max(qmax, std::abs(v));
  return 2.0 * stqp.n * qmax;
}

model::LpccInstance stqp_to_lpcc(const qp::QpInstance& stqp) {
  if (!is_stqp(stqp)) throw Error("stqp_to_lpcc: instance is not simplex-constrained");
  const int n = stqp.n;
  const double M = stqp_big_m(stqp);
  model::LpccInstance inst;
  inst.kind = model::InstanceKind::stqp_kkt;
  inst.n = 1;  // free multiplier mu of the simplex equality
  inst.m = n;  // pairs (x_j, lambda_j)
  inst.k = n + 1;
  inst.c = {0.5};
  inst.e.assign(n, 0.0);
  for (int j = 0; j < n; ++j) inst.e[j] = 0.5 * stqp.c[j];
  inst.f.assign(n, 0.0);
  inst.A = Matrix(inst.k, 1);
  inst.B = Matrix(inst.k, n);
  inst.C = Matrix(inst.k, n);
  inst.b.assign(inst.k, 0.0);
  // stationarity: Q x + c - lambda - mu 1 = 0
  for (int r = 0; r < n; ++r) {
    inst.A(r, 0) = -1.0;
    for (int j = 0; j < n; ++j) inst.B(r, j) = stqp.Q(r, j);
    inst.C(r, r) = -1.0;
    inst.b[r] = -stqp.c[r];
  }
  // simplex: sum x = 1
  for (int j = 0; j < n; ++j) inst.B(n, j) = 1.0;
  inst.b[n] = 1.0;
  inst.big_m = std::max(1.0, M);
  inst.y_upper.assign(n, 1.0);  // x lives on the simplex
  inst.z_upper.assign(n, M);
  model::finalize_bounds(inst);
  inst.metadata["family"] = "stqp";
  inst.validate();
  return inst;
}

reform::MilpModel stqp_to_milp(const qp::QpInstance& stqp) {
  if (!is_stqp(stqp)) throw Error("stqp_to_milp: instance is not simplex-constrained");
  const int n = stqp.n;
  const double M = stqp_big_m(stqp);
  reform::MilpModel mm;
  mm.n_x = 1;
  mm.n_pairs = n;
  mm.x_col.assign(1, -1);
  mm.y_col.assign(n, -1);
  mm.z_col.assign(n, -1);
  mm.w_col.assign(n, -1);

  auto add_col = [&](reform::MilpColumn c, double obj) {
    mm.cols.push_back(std::move(c));
    mm.objective.push_back(obj);
    return static_cast<int>(mm.cols.size()) - 1;
  };
  // objective (c'x + mu) / 2
  for (int j = 0; j < n; ++j)
    mm.y_col[j] = add_col({"x" + std::to_string(j), 0.0, 1.0, reform::VarKind::continuous,
                           reform::ColRole::y, j, true},
                          0.5 * stqp.c[j]);
  for (int j = 0; j < n; ++j)
    mm.z_col[j] = add_col({"lam" + std::to_string(j), 0.0, M, reform::VarKind::continuous,
                           reform::ColRole::z, j, true},
                          0.0);
  mm.x_col[0] =
      add_col({"mu", -kInf, kInf, reform::VarKind::continuous, reform::ColRole::x, 0, true}, 0.5);
  // binaries in the paper's orientation: z_j = 1 forces x_j = 0
  for (int j = 0; j < n; ++j)
    mm.w_col[j] = add_col({"zz" + std::to_string(j), 0.0, 1.0, reform::VarKind::binary,
                           reform::ColRole::w, j, false},
                          0.0);

  // Qx + c - lambda - mu 1 = 0
  for (int r = 0; r < n; ++r) {
    reform::MilpRow row;
    row.name = "stat" + std::to_string(r);
    row.sense = reform::RowSense::eq;
    row.rhs = -stqp.c[r];
    for (int j = 0; j < n; ++j)
      if (stqp.Q(r, j) != 0.0) {
        row.cols.push_back(mm.y_col[j]);
        row.coefs.push_back(stqp.Q(r, j));
      }
    row.cols.push_back(mm.z_col[r]);
    row.coefs.push_back(-1.0);
    row.cols.push_back(mm.x_col[0]);
    row.coefs.push_back(-1.0);
    mm.rows.push_back(std::move(row));
  }
  {
    reform::MilpRow simplex;
    simplex.name = "simplex";
    simplex.sense = reform::RowSense::eq;
    simplex.rhs = 1.0;
    for (int j = 0; j < n; ++j) {
      simplex.cols.push_back(mm.y_col[j]);
      simplex.coefs.push_back(1.0);
    }
    mm.rows.push_back(std::move(simplex));
  }
  for (int j = 0; j < n; ++j) {
    reform::MilpRow lam;  // lambda_j - M zz_j <= 0
    lam.name = "indlam" + std::to_string(j);
    lam.sense = reform::RowSense::le;
    lam.rhs = 0.0;
    lam.cols = {mm.z_col[j], mm.w_col[j]};
    lam.coefs = {1.0, -M};
    mm.rows.push_back(std::move(lam));

    reform::MilpRow xx;  // x_j + zz_j <= 1
    xx.name = "indx" + std::to_string(j);
    xx.sense = reform::RowSense::le;
    xx.rhs = 1.0;
    xx.cols = {mm.y_col[j], mm.w_col[j]};
    xx.coefs = {1.0, 1.0};
    mm.rows.push_back(std::move(xx));
  }
  mm.validate();
  return mm;
}

qp::QpInstance stqp_from_lpcc(const model::LpccInstance& inst) {
  if (inst.kind != model::InstanceKind::stqp_kkt)
    throw Error("stqp_from_lpcc: instance is not an stqp_kkt LPCC");
  const int n = inst.m;
  qp::QpInstance q;
  q.n = n;
  q.m = n + 2;
  q.Q = Matrix(n, n);
  q.c.assign(n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) q.Q(r, j) = inst.B(r, j);
    q.c[r] = -inst.b[r];
  }
  q.D = Matrix(n + 2, n);
  q.d.assign(n + 2, 0.0);
  for (int j = 0; j < n; ++j) {
    q.D(0, j) = 1.0;
    q.D(1, j) = -1.0;
    q.D(2 + j, j) = 1.0;
  }
  q.d[0] = 1.0;
  q.d[1] = -1.0;
  q.validate();
  return q;
}

QapData parse_qaplib(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> tokens;
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      tokens.push_back(v);
    } catch (const std::exception&) {
      throw Error("parse_qaplib: non-numeric token '" + tok + "'");
    }
  }
  if (tokens.empty()) throw Error("parse_qaplib: empty input");
  int n = static_cast<int>(tokens[0]);
  if (n <= 0 || tokens[0] != n) throw Error("parse_qaplib: bad dimension token");
  size_t want = 1 + 2 * static_cast<size_t>(n) * n;
  if (tokens.size() != want)
    throw Error("parse_qaplib: expected " + std::to_string(want) + " tokens, got " +
                std::to_string(tokens.size()));
  QapData q;
  q.n = n;
  q.F = Matrix(n, n);
  q.D = Matrix(n, n);
  size_t t = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q.F(i, j) = tokens[t++];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q.D(i, j) = tokens[t++];
  return q;
}

QapData load_qaplib(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_qaplib: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_qaplib(ss.str());
}

double qap_objective_of_permutation(const QapData& qap, const std::vector<int>& perm) {
  const int n = qap.n;
  if (static_cast<int>(perm.size()) != n) throw Error("qap objective: permutation length mismatch");
  std::vector<char> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw Error("qap objective: not a permutation");
    seen[p] = 1;
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc += qap.F(i, j) * qap.D(perm[i], perm[j]);
  return 0.5 * acc;
}

QapQp qap_to_qp(const QapData& qap, double margin) {
  if (!(margin > 0.0)) throw Error("qap_to_qp: margin must be positive");
  const int n = qap.n;
  const int N = n * n;
  Matrix S(N, N);
  // S[(i-1)n+k, (j-1)n+l] = F_ij D_kl  (0-based: row i*n+k, col j*n+l)
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) S(i * n + k, j * n + l) = qap.F(i, j) * qap.D(k, l);

  Matrix sym(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) sym(a, b) = 0.5 * (S(a, b) + S(b, a));
  double alpha = 0.0;
  for (int a = 0; a < N; ++a) {
    double row = 0.0;
    for (int b = 0; b < N; ++b) row += std::abs(sym(a, b));
    alpha = std::max(alpha, row);
  }
  alpha += margin;

  QapQp out;
  out.alpha = alpha;
  qp::QpInstance& q = out.qp;
  q.n = N;
  q.m = 4 * n + N;
  q.Q = Matrix(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) q.Q(a, b) = sym(a, b) - (a == b ? alpha : 0.0);
  q.c.assign(N, 0.0);

  // row sums, column sums (paired inequalities), then x >= 0
  q.D = Matrix(q.m, N);
  q.d.assign(q.m, 0.0);
  int r = 0;
  for (int i = 0; i < n; ++i, r += 2) {
    for (int k = 0; k < n; ++k) {
      q.D(r, i * n + k) = 1.0;
      q.D(r + 1, i * n + k) = -1.0;
    }
    q.d[r] = 1.0;
    q.d[r + 1] = -1.0;
  }
  for (int k = 0; k < n; ++k, r += 2) {
    for (int i = 0; i < n; ++i) {
      q.D(r, i * n + k) = 1.0;
      q.D(r + 1, i * n + k) = -1.0;
    }
    q.d[r] = 1.0;
    q.d[r + 1] = -1.0;
  }
  for (int a = 0; a < N; ++a) q.D(r + a, a) = 1.0;
  q.validate();
  return out;
}

model::LpccInstance qap_lift_lpcc(const QapData& qap, double margin, double* alpha_out,
                                  std::vector<int>* x_pair_indices) {
  QapQp lifted = qap_to_qp(qap, margin);
  if (alpha_out) *alpha_out = lifted.alpha;
  const int n = qap.n;
  const int N = n * n;
  // multipliers of the assignment rows are unbounded as a set; a generous
  // retraction bound keeps one optimal point per piece
  double big_m = 4.0 * lifted.alpha * n + 10.0;
  model::LpccInstance inst = qp::to_lpcc(lifted.qp, big_m);
  inst.metadata["family"] = "qap_lift";
  if (x_pair_indices) {
    x_pair_indices->clear();
    for (int a = 0; a < N; ++a) x_pair_indices->push_back(4 * n + a);
  }
  return inst;
}

InvQpInstance gen_invqp(int m, int n, std::uint64_t seed, double sparsity, double perturbation) {
  if (!(m > n) || n < 1) throw Error("gen_invqp: need m > n >= 1");
  Rng rng(seed);

  // convex Q = G'G + 0.1 I with sparse G, sparse D
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = (rng.uniform01() < sparsity) ? rng.uniform(-1.0, 1.0) : 0.0;
  Matrix Q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int t = 0; t < n; ++t) acc += G(t, i) * G(t, j);
      Q(i, j) = acc + (i == j ? 0.1 : 0.0);
    }
  Matrix D(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      D(i, j) = (rng.uniform01() < sparsity) ? rng.uniform(-1.0, 1.0) : 0.0;

  // a consistent KKT system around sampled (x, lambda, s)
  std::vector<double> x_star(n), lam_star(m), s_star(m);
  for (int j = 0; j < n; ++j) x_star[j] = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < m; ++i) {
    if (rng.uniform01() < 0.5) {
      lam_star[i] = rng.uniform(0.0, 1.0);
      s_star[i] = 0.0;
    } else {
      lam_star[i] = 0.0;
      s_star[i] = rng.uniform(0.0, 1.0);
    }
  }
  // hat_d = D x* - s*, hat_c = D' lambda* - Q x*
  std::vector<double> hat_d = matvec(D, x_star);
  for (int i = 0; i < m; ++i) hat_d[i] -= s_star[i];
  std::vector<double> hat_c(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += D(i, j) * lam_star[i];
    hat_c[j] = acc;
  }
  std::vector<double> Qx = matvec(Q, x_star);
  for (int j = 0; j < n; ++j) hat_c[j] -= Qx[j];

  InvQpInstance out;
  out.n = n;
  out.m = m;
  out.targets.hat_c = hat_c;
  out.targets.hat_d = hat_d;
  out.targets.hat_x = x_star;
  if (perturbation > 0.0) {
    for (double& v : out.targets.hat_c) v += rng.uniform(-perturbation, perturbation);
    for (double& v : out.targets.hat_d) v += rng.uniform(-perturbation, perturbation);
    for (double& v : out.targets.hat_x) v += rng.uniform(-perturbation, perturbation);
  }

  // decision block: c (n), d (m), x (n), t+ (2n+m), t- (2n+m)
  const int dev = 2 * n + m;
  const int nx = 2 * n + m + 2 * dev;
  const double box = 100.0, tcap = 400.0, big_m = 100.0;
  model::LpccInstance& L = out.lpcc;
  L.kind = model::InstanceKind::inv_qp;
  L.n = nx;
  L.m = m;
  L.k = n + m + dev;
  L.c.assign(nx, 0.0);
  for (int t = 0; t < 2 * dev; ++t) L.c[2 * n + m + t] = 1.0;  // sum(t+ + t-)
  L.e.assign(m, 0.0);
  L.f.assign(m, 0.0);
  L.A = Matrix(L.k, nx);
  L.B = Matrix(L.k, m);
  L.C = Matrix(L.k, m);
  L.b.assign(L.k, 0.0);

  const int col_c = 0, col_d = n, col_x = n + m, col_tp = 2 * n + m, col_tm = 2 * n + m + dev;
  // stationarity: Qx + c - D'lambda = 0
  for (int r = 0; r < n; ++r) {
    L.A(r, col_c + r) = 1.0;
    for (int j = 0; j < n; ++j) L.A(r, col_x + j) = Q(r, j);
    for (int i = 0; i < m; ++i) L.C(r, i) = -D(i, r);
  }
  // primal: Dx - d - s = 0
  for (int i = 0; i < m; ++i) {
    int r = n + i;
    for (int j = 0; j < n; ++j) L.A(r, col_x + j) = D(i, j);
    L.A(r, col_d + i) = -1.0;
    L.B(r, i) = -1.0;
  }
  // deviation split: (c,d,x) - t+ + t- = (hat_c, hat_d, hat_x)
  for (int t = 0; t < dev; ++t) {
    int r = n + m + t;
    L.A(r, t) = 1.0;  // (c,d,x) block is contiguous at the front
    L.A(r, col_tp + t) = -1.0;
    L.A(r, col_tm + t) = 1.0;
    L.b[r] = t < n ? out.targets.hat_c[t]
             : t < n + m ? out.targets.hat_d[t - n]
                         : out.targets.hat_x[t - n - m];
  }
  L.big_m = big_m;
  L.x_lower.assign(nx, -box);
  L.x_upper.assign(nx, box);
  for (int t = 0; t < 2 * dev; ++t) {
    L.x_lower[col_tp + t] = 0.0;
    L.x_upper[col_tp + t] = tcap;
  }
  model::finalize_bounds(L);
  L.metadata["family"] = "invqp";
  L.metadata["seed"] = std::to_string(seed);
  L.validate();

  // feasible point from the consistent sample: decision block at the
  // pre-perturbation values, deviations split into t+/t-
  out.seed.x.assign(nx, 0.0);
  for (int j = 0; j < n; ++j) out.seed.x[col_c + j] = hat_c[j];
  for (int i = 0; i < m; ++i) out.seed.x[col_d + i] = hat_d[i];
  for (int j = 0; j < n; ++j) out.seed.x[col_x + j] = x_star[j];
  for (int t = 0; t < dev; ++t) {
    double orig = t < n ? hat_c[t] : t < n + m ? hat_d[t - n] : x_star[t - n - m];
    double target = t < n          ? out.targets.hat_c[t]
                    : t < n + m ? out.targets.hat_d[t - n]
                                : out.targets.hat_x[t - n - m];
    double diff = orig - target;
    out.seed.x[col_tp + t] = std::max(diff, 0.0);
    out.seed.x[col_tm + t] = std::max(-diff, 0.0);
  }
  out.seed.y = s_star;
  out.seed.z = lam_star;
  return out;
}

double invqp_l1_deviation(const InvQpInstance& inst, const model::PointTriple& pt) {
  const int n = inst.n, m = inst.m;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) acc += std::abs(pt.x[j] - inst.targets.hat_c[j]);
  for (int i = 0; i < m; ++i) acc += std::abs(pt.x[n + i] - inst.targets.hat_d[i]);
  for (int j = 0; j < n; ++j) acc += std::abs(pt.x[n + m + j] - inst.targets.hat_x[j]);
  return acc;
}

}  // namespace pipopt::gen
