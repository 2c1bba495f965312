// SPDX-License-Identifier: Apache-2.0
#include "pipopt/qp.hpp"

#include <algorithm>
#include <cmath>

#include "pipopt/lp.hpp"
#include "pipopt/reform.hpp"

namespace pipopt::qp {

void QpInstance::validate() const {
  if (Q.rows() != n || Q.cols() != n) throw Error("QpInstance: Q has wrong shape");
  if (static_cast<int>(c.size()) != n) throw Error("QpInstance: c has wrong length");
  if (D.rows() != m || D.cols() != n) throw Error("QpInstance: D has wrong shape");
  if (static_cast<int>(d.size()) != m) throw Error("QpInstance: d has wrong length");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(Q(i, j) - Q(j, i)) > 1e-12) throw Error("QpInstance: Q is not symmetric");
  if (!Q.all_finite() || !D.all_finite()) throw Error("QpInstance: non-finite matrix entry");
}

double objective(const QpInstance& qp, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != qp.n) throw Error("qp objective: dimension mismatch");
  std::vector<double> Qx = matvec(qp.Q, x);
  return dot(qp.c, x) + 0.5 * dot(x, Qx);
}

std::vector<double> gradient(const QpInstance& qp, const std::vector<double>& x) {
  std::vector<double> g = matvec(qp.Q, x);
  for (int j = 0; j < qp.n; ++j) g[j] += qp.c[j];
  return g;
}

model::LpccInstance to_lpcc(const QpInstance& qp, double big_m) {
  qp.validate();
  model::LpccInstance inst;
  inst.kind = model::InstanceKind::qp_kkt;
  inst.n = qp.n;
  inst.m = qp.m;
  inst.k = qp.n + qp.m;
  inst.c = qp.c;
  inst.e.assign(qp.m, 0.0);
  inst.f = qp.d;  // objective c'x + d'lambda
  inst.A = Matrix(inst.k, inst.n);
  inst.B = Matrix(inst.k, inst.m);
  inst.C = Matrix(inst.k, inst.m);
  inst.b.assign(inst.k, 0.0);
  // stationarity rows: Qx - D'lambda = -c
  for (int r = 0; r < qp.n; ++r) {
    for (int j = 0; j < qp.n; ++j) inst.A(r, j) = qp.Q(r, j);
    for (int i = 0; i < qp.m; ++i) inst.C(r, i) = -qp.D(i, r);
    inst.b[r] = -qp.c[r];
  }
  // slack rows: Dx - s = d
  for (int i = 0; i < qp.m; ++i) {
    int r = qp.n + i;
    for (int j = 0; j < qp.n; ++j) inst.A(r, j) = qp.D(i, j);
    inst.B(r, i) = -1.0;
    inst.b[r] = qp.d[i];
  }
  inst.big_m = big_m;
  model::finalize_bounds(inst);
  inst.validate();
  return inst;
}

model::PointTriple to_lpcc_point(const QpInstance& qp, const KktTriple& t) {
  model::PointTriple pt;
  pt.x = t.x;
  pt.y = t.s;
  pt.z = t.lambda;
  if (pt.y.empty() && qp.m > 0) {
    pt.y = matvec(qp.D, t.x);
    for (int i = 0; i < qp.m; ++i) pt.y[i] -= qp.d[i];
  }
  return pt;
}

KktTriple from_lpcc_point(const model::PointTriple& pt) {
  return KktTriple{pt.x, pt.y, pt.z};
}

QpInstance from_kkt_lpcc(const model::LpccInstance& inst) {
  if (inst.kind != model::InstanceKind::qp_kkt)
    throw Error("from_kkt_lpcc: instance is not a qp_kkt LPCC");
  QpInstance q;
  q.n = inst.n;
  q.m = inst.m;
  q.Q = Matrix(q.n, q.n);
  q.c.assign(q.n, 0.0);
  q.D = Matrix(q.m, q.n);
  q.d.assign(q.m, 0.0);
  for (int r = 0; r < q.n; ++r) {
    for (int j = 0; j < q.n; ++j) q.Q(r, j) = inst.A(r, j);
    q.c[r] = -inst.b[r];
  }
  for (int i = 0; i < q.m; ++i) {
    int r = q.n + i;
    for (int j = 0; j < q.n; ++j) q.D(i, j) = inst.A(r, j);
    q.d[i] = inst.b[r];
  }
  q.validate();
  return q;
}

StationaryResult stationary_point(const QpInstance& qp, const std::vector<double>& x0, double tol,
                                  int max_iter) {
  qp.validate();
  if (static_cast<int>(x0.size()) != qp.n) throw Error("stationary_point: x0 dimension mismatch");

  // one reusable LP for the linear-minimization oracle over Dv >= d
  lp::LpModel lpm;
  for (int j = 0; j < qp.n; ++j) lpm.add_col(0.0, -kInf, kInf);
  for (int i = 0; i < qp.m; ++i) {
    std::vector<int> cols;
    std::vector<double> coefs;
    for (int j = 0; j < qp.n; ++j)
      if (qp.D(i, j) != 0.0) {
        cols.push_back(j);
        coefs.push_back(qp.D(i, j));
      }
    lpm.add_row(std::move(cols), std::move(coefs), lp::RowSense::ge, qp.d[i]);
  }
  lp::Solver oracle_lp;
  oracle_lp.load(lpm);

  StationaryResult res;
  std::vector<double> x = x0;

  // active atoms with convex weights; x stays their combination
  std::vector<std::vector<double>> atoms{x0};
  std::vector<double> weights{1.0};

  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> g = gradient(qp, x);
    for (int j = 0; j < qp.n; ++j) oracle_lp.set_objective_coeff(j, g[j]);
    lp::LpSolution lmo = oracle_lp.solve();
    if (lmo.status != lp::LpStatus::optimal)
      throw Error("stationary_point: linear oracle failed (region empty or unbounded)");
    const std::vector<double>& v = lmo.primal;

    double gap = dot(g, x) - dot(g, v);
    res.stationarity_residual = gap;
    res.iterations = it;
    if (gap <= tol) {
      res.converged = true;
      break;
    }

    // away atom
    int away = 0;
    double away_val = -kInf;
    for (size_t a = 0; a < atoms.size(); ++a) {
      double val = dot(g, atoms[a]);
      if (val > away_val) {
        away_val = val;
        away = static_cast<int>(a);
      }
    }

    bool use_away = (away_val - dot(g, x)) > gap && weights[away] < 1.0 - 1e-12;
    std::vector<double> dir(qp.n);
    double t_max;
    if (use_away) {
      for (int j = 0; j < qp.n; ++j) dir[j] = x[j] - atoms[away][j];
      t_max = weights[away] / (1.0 - weights[away]);
    } else {
      for (int j = 0; j < qp.n; ++j) dir[j] = v[j] - x[j];
      t_max = 1.0;
    }

    double g_dir = dot(g, dir);
    if (g_dir >= -1e-15) {
      res.converged = gap <= tol;
      break;
    }
    std::vector<double> Qd = matvec(qp.Q, dir);
    double curve = dot(dir, Qd);
    double t = (curve > 1e-15) ? std::min(t_max, -g_dir / curve) : t_max;
    if (!(t > 0.0) || !std::isfinite(t)) break;

    for (int j = 0; j < qp.n; ++j) x[j] += t * dir[j];

    if (use_away) {
      double scale = 1.0 + t;
      for (double& w : weights) w *= scale;
      weights[away] -= t;
      if (weights[away] <= 1e-12) {
        atoms.erase(atoms.begin() + away);
        weights.erase(weights.begin() + away);
      }
    } else {
      for (double& w : weights) w *= (1.0 - t);
      if (t >= 1.0 - 1e-12) {
        atoms.assign(1, v);
        weights.assign(1, 1.0);
      } else {
        atoms.push_back(v);
        weights.push_back(t);
      }
    }
    // keep the atom list from growing without bound
    if (atoms.size() > 4 * static_cast<size_t>(qp.n) + 8) {
      atoms.assign(1, x);
      weights.assign(1, 1.0);
    }
  }

  res.triple.x = x;
  res.triple.s = matvec(qp.D, x);
  for (int i = 0; i < qp.m; ++i) res.triple.s[i] -= qp.d[i];
  if (auto mult = recover_multipliers(qp, x)) {
    res.triple.lambda = mult->lambda;
  } else {
    res.triple.lambda.assign(qp.m, 0.0);
    res.converged = false;
  }
  return res;
}

std::optional<KktTriple> recover_multipliers(const QpInstance& qp, const std::vector<double>& x,
                                             double active_tol) {
  qp.validate();
  KktTriple t;
  t.x = x;
  t.s = matvec(qp.D, x);
  for (int i = 0; i < qp.m; ++i) t.s[i] -= qp.d[i];
  std::vector<double> g = gradient(qp, x);

  std::vector<int> active;
  for (int i = 0; i < qp.m; ++i)
    if (t.s[i] <= active_tol) active.push_back(i);

  // elastic rows: D_A' lambda_A + r+ - r- = g, minimize sum of residuals
  lp::LpModel lpm;
  std::vector<int> lam_col(active.size());
  for (size_t a = 0; a < active.size(); ++a) lam_col[a] = lpm.add_col(0.0, 0.0, kInf);
  std::vector<int> rp(qp.n), rm(qp.n);
  for (int j = 0; j < qp.n; ++j) {
    rp[j] = lpm.add_col(1.0, 0.0, kInf);
    rm[j] = lpm.add_col(1.0, 0.0, kInf);
  }
  for (int j = 0; j < qp.n; ++j) {
    std::vector<int> cols;
    std::vector<double> coefs;
    for (size_t a = 0; a < active.size(); ++a) {
      double v = qp.D(active[a], j);
      if (v != 0.0) {
        cols.push_back(lam_col[a]);
        coefs.push_back(v);
      }
    }
    cols.push_back(rp[j]);
    coefs.push_back(1.0);
    cols.push_back(rm[j]);
    coefs.push_back(-1.0);
    lpm.add_row(std::move(cols), std::move(coefs), lp::RowSense::eq, g[j]);
  }
  lp::LpSolution sol = lp::solve_lp(lpm);
  if (sol.status != lp::LpStatus::optimal || sol.objective > active_tol) return std::nullopt;

  t.lambda.assign(qp.m, 0.0);
  for (size_t a = 0; a < active.size(); ++a) t.lambda[active[a]] = sol.primal[lam_col[a]];
  return t;
}

model::IndexPartition default_certificate_partition(const KktTriple& triple, double tol) {
  model::IndexPartition part;
  for (int i = 0; i < static_cast<int>(triple.lambda.size()); ++i) {
    if (triple.lambda[i] > tol)
      part.m_z_plus.push_back(i);  // M_lambda+
    else
      part.m_c.push_back(i);
  }
  return part;  // M_s+ stays empty: tightest legal relaxation
}

Certificate local_min_certificate(const QpInstance& qp, double big_m, const KktTriple& triple,
                                  const model::IndexPartition& part, const bb::BbConfig& engine) {
  model::LpccInstance inst = to_lpcc(qp, big_m);
  part.validate(inst.m);
  model::PointTriple pt = to_lpcc_point(qp, triple);
  // partition legality per the KKT index-set condition
  for (int i : part.m_y_plus)
    if (!(pt.y[i] > 0)) throw Error("certificate partition: M_s+ holds a zero slack");
  for (int i : part.m_z_plus)
    if (!(pt.z[i] > 0)) throw Error("certificate partition: M_lambda+ holds a zero multiplier");

  reform::MilpModel relax = reform::build_relaxed_restricted_kkt(inst, part);
  bb::SolveOutcome out = bb::solve_milp(relax, std::nullopt, engine);
  if (out.status == bb::SolveStatus::unbounded) return Certificate::not_certified;
  if (out.status == bb::SolveStatus::infeasible)
    throw Error("certificate relaxation infeasible although the triple is feasible");
  if (out.status != bb::SolveStatus::optimal) return Certificate::indeterminate;

  double ell = model::evaluate_objective(inst, pt);
  return ell <= out.incumbent->objective + 1e-8 ? Certificate::certified
                                                : Certificate::not_certified;
}

Certificate local_min_certificate(const QpInstance& qp, double big_m, const KktTriple& triple,
                                  const bb::BbConfig& engine) {
  return local_min_certificate(qp, big_m, triple,
                               default_certificate_partition(triple, kPositiveTol), engine);
}

}  // namespace pipopt::qp
