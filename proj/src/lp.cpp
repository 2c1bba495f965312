// SPDX-License-Identifier: Apache-2.0
#include "pipopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace pipopt::lp {

int LpModel::add_col(double cost, double lower, double upper) {
  objective.push_back(cost);
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  return num_cols++;
}

void LpModel::add_row(std::vector<int> cols, std::vector<double> coefs, RowSense sense,
                      double rhs) {
  Row r;
  r.cols = std::move(cols);
  r.coefs = std::move(coefs);
  r.sense = sense;
  r.rhs = rhs;
  rows.push_back(std::move(r));
}

void LpModel::validate() const {
  if (static_cast<int>(objective.size()) != num_cols ||
      static_cast<int>(col_lower.size()) != num_cols ||
      static_cast<int>(col_upper.size()) != num_cols)
    throw Error("LpModel: column arrays out of sync");
  for (int j = 0; j < num_cols; ++j) {
    if (col_lower[j] > col_upper[j]) throw Error("LpModel: crossed bounds");
    if (!std::isfinite(objective[j])) throw Error("LpModel: non-finite objective");
  }
  for (const Row& r : rows) {
    if (r.cols.size() != r.coefs.size()) throw Error("LpModel: row arrays out of sync");
    for (int j : r.cols)
      if (j < 0 || j >= num_cols) throw Error("LpModel: row references unknown column");
    for (double v : r.coefs)
      if (!std::isfinite(v)) throw Error("LpModel: non-finite coefficient");
    if (!std::isfinite(r.rhs)) throw Error("LpModel: non-finite rhs");
  }
}

namespace {

struct Eta {
  int slot;
  std::vector<double> col;
};

}  // namespace

struct Solver::Impl {
  SolverConfig cfg;

  int m = 0;  // rows
  int n = 0;  // structural columns
  int ncols = 0;

  // structural matrix, column-major; logical columns are implicit units
  std::vector<double> acol;
  std::vector<double> lower, upper, cost;  // size ncols
  std::vector<double> rhs;                 // size m

  std::vector<ColState> state;   // size ncols
  std::vector<int> basic;        // size m: column per slot
  std::vector<int> basis_pos;    // size ncols: slot or -1
  std::vector<double> xval;      // size ncols

  // factorization of the basis
  std::vector<double> lu;  // m x m row-major
  std::vector<int> ipiv;
  std::vector<Eta> etas;
  bool factor_ok = false;
  bool basics_dirty = true;

  std::vector<double> devex;  // pricing weights
  bool bland = false;
  int stall = 0;
  int iterations = 0;

  // scratch
  std::vector<double> work, work2;

  const double* col_ptr(int j) const { return &acol[static_cast<size_t>(j) * m]; }

  double col_entry(int j, int r) const {
    return j < n ? acol[static_cast<size_t>(j) * m + r] : (j - n == r ? 1.0 : 0.0);
  }

  // y' a_j for a dense m-vector y
  double dot_col(const std::vector<double>& y, int j) const {
    if (j >= n) return y[j - n];
    const double* a = col_ptr(j);
    double acc = 0.0;
    for (int r = 0; r < m; ++r) acc += y[r] * a[r];
    return acc;
  }

  void load(const LpModel& model);
  bool factorize();
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  void compute_basics();
  void snap_nonbasic(int j);
  void reset_to_logical();
  bool refactor_or_reset();

  int price(const std::vector<double>& y, bool phase1, int* dir_out, double* dj_out);
  LpStatus run_phase(bool phase1);
  double infeasibility() const;
  LpSolution finish(LpStatus status);
  LpSolution solve();
};

void Solver::Impl::load(const LpModel& model) {
  model.validate();
  m = static_cast<int>(model.rows.size());
  n = model.num_cols;
  ncols = n + m;
  acol.assign(static_cast<size_t>(n) * m, 0.0);
  lower.assign(ncols, 0.0);
  upper.assign(ncols, 0.0);
  cost.assign(ncols, 0.0);
  rhs.assign(m, 0.0);
  for (int j = 0; j < n; ++j) {
    lower[j] = model.col_lower[j];
    upper[j] = model.col_upper[j];
    cost[j] = model.objective[j];
  }
  for (int r = 0; r < m; ++r) {
    const LpModel::Row& row = model.rows[r];
    for (size_t t = 0; t < row.cols.size(); ++t)
      acol[static_cast<size_t>(row.cols[t]) * m + r] += row.coefs[t];
    rhs[r] = row.rhs;
    int s = n + r;
    switch (row.sense) {
      case RowSense::eq: lower[s] = 0.0; upper[s] = 0.0; break;
      case RowSense::le: lower[s] = 0.0; upper[s] = kInf; break;
      case RowSense::ge: lower[s] = -kInf; upper[s] = 0.0; break;
    }
  }
  reset_to_logical();
}

void Solver::Impl::snap_nonbasic(int j) {
  if (state[j] == ColState::basic) return;
  if (state[j] == ColState::at_lower && std::isfinite(lower[j])) {
    xval[j] = lower[j];
    return;
  }
  if (state[j] == ColState::at_upper && std::isfinite(upper[j])) {
    xval[j] = upper[j];
    return;
  }
  if (std::isfinite(lower[j])) {
    state[j] = ColState::at_lower;
    xval[j] = lower[j];
  } else if (std::isfinite(upper[j])) {
    state[j] = ColState::at_upper;
    xval[j] = upper[j];
  } else {
    state[j] = ColState::nonbasic_free;
    xval[j] = 0.0;
  }
}

void Solver::Impl::reset_to_logical() {
  state.assign(ncols, ColState::at_lower);
  basic.resize(m);
  basis_pos.assign(ncols, -1);
  xval.assign(ncols, 0.0);
  for (int j = 0; j < n; ++j) snap_nonbasic(j);
  for (int r = 0; r < m; ++r) {
    int s = n + r;
    state[s] = ColState::basic;
    basic[r] = s;
    basis_pos[s] = r;
  }
  etas.clear();
  factor_ok = false;
  basics_dirty = true;
}

bool Solver::Impl::factorize() {
  etas.clear();
  lu.assign(static_cast<size_t>(m) * m, 0.0);
  ipiv.assign(m, 0);
  for (int slot = 0; slot < m; ++slot) {
    int j = basic[slot];
    if (j >= n) {
      lu[static_cast<size_t>(j - n) * m + slot] = 1.0;
    } else {
      const double* a = col_ptr(j);
      for (int r = 0; r < m; ++r) lu[static_cast<size_t>(r) * m + slot] = a[r];
    }
  }
  for (int k = 0; k < m; ++k) {
    int p = k;
    double best = std::abs(lu[static_cast<size_t>(k) * m + k]);
    for (int i = k + 1; i < m; ++i) {
      double v = std::abs(lu[static_cast<size_t>(i) * m + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < 1e-12) {
      factor_ok = false;
      return false;
    }
    ipiv[k] = p;
    if (p != k)
      for (int c = 0; c < m; ++c)
        std::swap(lu[static_cast<size_t>(k) * m + c], lu[static_cast<size_t>(p) * m + c]);
    double piv = lu[static_cast<size_t>(k) * m + k];
    for (int i = k + 1; i < m; ++i) {
      double& lik = lu[static_cast<size_t>(i) * m + k];
      if (lik == 0.0) continue;
      lik /= piv;
      double f = lik;
      const double* urow = &lu[static_cast<size_t>(k) * m];
      double* irow = &lu[static_cast<size_t>(i) * m];
      for (int c = k + 1; c < m; ++c) irow[c] -= f * urow[c];
    }
  }
  factor_ok = true;
  return true;
}

void Solver::Impl::ftran(std::vector<double>& v) const {
  for (int k = 0; k < m; ++k)
    if (ipiv[k] != k) std::swap(v[k], v[ipiv[k]]);
  for (int k = 0; k < m; ++k) {
    double vk = v[k];
    if (vk == 0.0) continue;
    for (int i = k + 1; i < m; ++i) v[i] -= lu[static_cast<size_t>(i) * m + k] * vk;
  }
  for (int k = m - 1; k >= 0; --k) {
    v[k] /= lu[static_cast<size_t>(k) * m + k];
    double vk = v[k];
    if (vk == 0.0) continue;
    for (int i = 0; i < k; ++i) v[i] -= lu[static_cast<size_t>(i) * m + k] * vk;
  }
  for (const Eta& e : etas) {
    double t = v[e.slot] / e.col[e.slot];
    if (t != 0.0) {
      for (int i = 0; i < m; ++i) v[i] -= e.col[i] * t;
      v[e.slot] = t;
    } else {
      v[e.slot] = 0.0;
    }
  }
}

void Solver::Impl::btran(std::vector<double>& v) const {
  for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
    const Eta& e = *it;
    double acc = v[e.slot];
    for (int i = 0; i < m; ++i)
      if (i != e.slot) acc -= e.col[i] * v[i];
    v[e.slot] = acc / e.col[e.slot];
  }
  // solve U' w = v (forward), then L' t = w (back), then undo row swaps
  for (int k = 0; k < m; ++k) {
    double acc = v[k];
    for (int i = 0; i < k; ++i) acc -= lu[static_cast<size_t>(i) * m + k] * v[i];
    v[k] = acc / lu[static_cast<size_t>(k) * m + k];
  }
  for (int k = m - 1; k >= 0; --k) {
    double acc = v[k];
    for (int i = k + 1; i < m; ++i) acc -= lu[static_cast<size_t>(i) * m + k] * v[i];
    v[k] = acc;
  }
  for (int k = m - 1; k >= 0; --k)
    if (ipiv[k] != k) std::swap(v[k], v[ipiv[k]]);
}

void Solver::Impl::compute_basics() {
  work.assign(m, 0.0);
  for (int r = 0; r < m; ++r) work[r] = rhs[r];
  for (int j = 0; j < ncols; ++j) {
    if (state[j] == ColState::basic) continue;
    snap_nonbasic(j);
    double v = xval[j];
    if (v == 0.0) continue;
    if (j >= n) {
      work[j - n] -= v;
    } else {
      const double* a = col_ptr(j);
      for (int r = 0; r < m; ++r) work[r] -= a[r] * v;
    }
  }
  ftran(work);
  for (int slot = 0; slot < m; ++slot) xval[basic[slot]] = work[slot];
  basics_dirty = false;
}

bool Solver::Impl::refactor_or_reset() {
  if (factorize()) return true;
  reset_to_logical();
  if (!factorize()) return false;
  compute_basics();
  return true;
}

double Solver::Impl::infeasibility() const {
  double worst = 0.0;
  for (int slot = 0; slot < m; ++slot) {
    int j = basic[slot];
    worst = std::max(worst, xval[j] - upper[j]);
    worst = std::max(worst, lower[j] - xval[j]);
  }
  return worst;
}

// entering column choice; returns -1 when none is eligible
int Solver::Impl::price(const std::vector<double>& y, bool phase1, int* dir_out, double* dj_out) {
  int best = -1, best_dir = 0;
  double best_score = 0.0, best_dj = 0.0;
  double tol = cfg.opt_tol;
  for (int j = 0; j < ncols; ++j) {
    if (state[j] == ColState::basic) continue;
    if (upper[j] - lower[j] < 1e-30) continue;  // fixed
    double dj = (phase1 ? 0.0 : cost[j]) - dot_col(y, j);
    int dir = 0;
    if (state[j] == ColState::at_lower) {
      if (dj < -tol) dir = 1;
    } else if (state[j] == ColState::at_upper) {
      if (dj > tol) dir = -1;
    } else {  // nonbasic free
      if (dj < -tol)
        dir = 1;
      else if (dj > tol)
        dir = -1;
    }
    if (dir == 0) continue;
    if (bland) {
      *dir_out = dir;
      *dj_out = dj;
      return j;
    }
    double score = dj * dj / devex[j];
    if (score > best_score) {
      best_score = score;
      best = j;
      best_dir = dir;
      best_dj = dj;
    }
  }
  *dir_out = best_dir;
  *dj_out = best_dj;
  return best;
}

LpStatus Solver::Impl::run_phase(bool phase1) {
  std::vector<double>& y = work2;
  int resets = 0;
  while (true) {
    if (iterations >= cfg.max_iterations) return LpStatus::numerical_failure;

    if (phase1 && infeasibility() <= cfg.feas_tol) return LpStatus::optimal;

    // duals for the effective cost vector
    y.assign(m, 0.0);
    bool any_sigma = false;
    for (int slot = 0; slot < m; ++slot) {
      int j = basic[slot];
      if (phase1) {
        if (xval[j] > upper[j] + cfg.feas_tol) {
          y[slot] = 1.0;
          any_sigma = true;
        } else if (xval[j] < lower[j] - cfg.feas_tol) {
          y[slot] = -1.0;
          any_sigma = true;
        }
      } else {
        y[slot] = cost[j];
      }
    }
    if (phase1 && !any_sigma) return LpStatus::optimal;
    btran(y);

    int dir = 0;
    double dj = 0.0;
    int q = price(y, phase1, &dir, &dj);
    if (q < 0) {
      if (phase1) return infeasibility() <= cfg.feas_tol ? LpStatus::optimal : LpStatus::infeasible;
      return LpStatus::optimal;
    }

    // direction through the basis
    std::vector<double>& d = work;
    d.assign(m, 0.0);
    if (q >= n)
      d[q - n] = 1.0;
    else {
      const double* a = col_ptr(q);
      for (int r = 0; r < m; ++r) d[r] = a[r];
    }
    ftran(d);

    double t_own = upper[q] - lower[q];  // +inf allowed
    if (state[q] == ColState::nonbasic_free) t_own = kInf;

    // Breakpoint target for a basic variable, honoring phase-1 pass-through:
    // a variable beyond a bound blocks only when moving back toward it.
    auto block_target = [&](int j, double rate, double* target) {
      if (rate > 0) {
        if (xval[j] < lower[j] - cfg.feas_tol)
          *target = lower[j];
        else if (xval[j] <= upper[j] + cfg.feas_tol)
          *target = upper[j];
        else
          return false;  // violated above, moving further up
      } else {
        if (xval[j] > upper[j] + cfg.feas_tol)
          *target = upper[j];
        else if (xval[j] >= lower[j] - cfg.feas_tol)
          *target = lower[j];
        else
          return false;  // violated below, moving further down
      }
      return std::isfinite(*target);
    };

    // Harris two-pass ratio test
    double t_relaxed = t_own;
    for (int slot = 0; slot < m; ++slot) {
      double rate = -dir * d[slot];
      if (std::abs(rate) <= cfg.pivot_tol) continue;
      double target;
      if (!block_target(basic[slot], rate, &target)) continue;
      double bp = (target + (rate > 0 ? cfg.feas_tol : -cfg.feas_tol) - xval[basic[slot]]) / rate;
      if (bp < t_relaxed) t_relaxed = bp;
    }

    if (!std::isfinite(t_relaxed)) {
      if (phase1) return LpStatus::numerical_failure;
      return LpStatus::unbounded;
    }

    int leave_slot = -1;
    double leave_target = 0.0, t_strict = t_own, best_rate = 0.0;
    for (int slot = 0; slot < m; ++slot) {
      double rate = -dir * d[slot];
      if (std::abs(rate) <= cfg.pivot_tol) continue;
      int j = basic[slot];
      double target;
      if (!block_target(j, rate, &target)) continue;
      double bp = (target - xval[j]) / rate;
      if (bp <= t_relaxed + 1e-30) {
        bool better;
        if (bland)
          better = leave_slot < 0 || bp < t_strict ||
                   (bp == t_strict && j < basic[leave_slot]);
        else
          better = leave_slot < 0 || std::abs(rate) > best_rate;
        if (better) {
          leave_slot = slot;
          leave_target = target;
          t_strict = bp;
          best_rate = std::abs(rate);
        }
      }
    }

    ++iterations;
    bool progress;
    if (leave_slot < 0 || t_own <= t_strict) {
      // bound flip, or an unblocked move to the opposite bound
      if (!std::isfinite(t_own)) {
        if (phase1) return LpStatus::numerical_failure;
        return LpStatus::unbounded;
      }
      double t = t_own;
      for (int slot = 0; slot < m; ++slot) xval[basic[slot]] += -dir * d[slot] * t;
      state[q] = dir > 0 ? ColState::at_upper : ColState::at_lower;
      xval[q] = dir > 0 ? upper[q] : lower[q];
      progress = t > 1e-12;
    } else {
      double t = std::max(t_strict, 0.0);

      // Devex reference update needs the pivot row of the current basis
      if (!bland) {
        std::vector<double>& er = work2;
        er.assign(m, 0.0);
        er[leave_slot] = 1.0;
        btran(er);
        double aq = d[leave_slot];
        double wq = std::max(devex[q], 1.0);
        for (int j2 = 0; j2 < ncols; ++j2) {
          if (state[j2] == ColState::basic || j2 == q) continue;
          double alpha = dot_col(er, j2);
          if (alpha == 0.0) continue;
          double cand = (alpha / aq) * (alpha / aq) * wq;
          if (cand > devex[j2]) devex[j2] = cand;
        }
        devex[basic[leave_slot]] = std::max(wq / (aq * aq), 1.0);
      }

      for (int slot = 0; slot < m; ++slot) xval[basic[slot]] += -dir * d[slot] * t;
      int leave_col = basic[leave_slot];
      xval[leave_col] = leave_target;
      state[leave_col] = (leave_target == upper[leave_col] && upper[leave_col] != lower[leave_col])
                             ? ColState::at_upper
                             : ColState::at_lower;
      basis_pos[leave_col] = -1;
      double enter_start = (state[q] == ColState::at_upper) ? upper[q]
                           : (state[q] == ColState::at_lower) ? lower[q]
                                                              : 0.0;
      xval[q] = enter_start + dir * t;
      state[q] = ColState::basic;
      basic[leave_slot] = q;
      basis_pos[q] = leave_slot;

      etas.push_back(Eta{leave_slot, d});
      if (static_cast<int>(etas.size()) >= cfg.refactor_interval) {
        if (!factorize()) {
          reset_to_logical();
          if (!factorize() || ++resets > 3) return LpStatus::numerical_failure;
        }
        compute_basics();
      }
      progress = t > 1e-12;
    }

    if (progress) {
      stall = 0;
      if (bland) {
        bland = false;
        devex.assign(ncols, 1.0);
      }
    } else if (++stall >= cfg.stall_limit) {
      bland = true;
    }
  }
}

LpSolution Solver::Impl::finish(LpStatus status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  sol.primal.assign(n, 0.0);
  for (int j = 0; j < n; ++j) sol.primal[j] = xval[j];
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += cost[j] * xval[j];
  sol.dual.assign(m, 0.0);
  sol.reduced_costs.assign(n, 0.0);
  if (factor_ok) {
    std::vector<double> y(m, 0.0);
    for (int slot = 0; slot < m; ++slot) y[slot] = cost[basic[slot]];
    btran(y);
    sol.dual = y;
    for (int j = 0; j < n; ++j)
      sol.reduced_costs[j] = state[j] == ColState::basic ? 0.0 : cost[j] - dot_col(y, j);
  }
  sol.basis.state = state;
  return sol;
}

LpSolution Solver::Impl::solve() {
  iterations = 0;
  stall = 0;
  bland = false;
  devex.assign(ncols, 1.0);

  if (!factor_ok || !etas.empty()) {
    if (!refactor_or_reset()) return finish(LpStatus::numerical_failure);
    basics_dirty = true;
  }
  if (basics_dirty) compute_basics();

  LpStatus s1 = run_phase(true);
  if (s1 != LpStatus::optimal) return finish(s1);
  LpStatus s2 = run_phase(false);
  return finish(s2);
}

Solver::Solver(SolverConfig cfg) : impl_(new Impl) { impl_->cfg = cfg; }
Solver::~Solver() { delete impl_; }
Solver::Solver(Solver&& other) noexcept : impl_(other.impl_) { other.impl_ = nullptr; }
Solver& Solver::operator=(Solver&& other) noexcept {
  if (this != &other) {
    delete impl_;
    impl_ = other.impl_;
    other.impl_ = nullptr;
  }
  return *this;
}

void Solver::load(const LpModel& model) { impl_->load(model); }

void Solver::set_col_bounds(int col, double lower, double upper) {
  if (col < 0 || col >= impl_->n) throw Error("set_col_bounds: bad column");
  if (lower > upper) throw Error("set_col_bounds: crossed bounds");
  impl_->lower[col] = lower;
  impl_->upper[col] = upper;
  if (impl_->state[col] != ColState::basic) impl_->snap_nonbasic(col);
  impl_->basics_dirty = true;
}

void Solver::set_objective_coeff(int col, double cost) {
  if (col < 0 || col >= impl_->n) throw Error("set_objective_coeff: bad column");
  impl_->cost[col] = cost;
}

void Solver::install_basis(const Basis& basis) {
  Impl& im = *impl_;
  if (static_cast<int>(basis.state.size()) != im.ncols) {
    im.reset_to_logical();
    return;
  }
  int nbasic = 0;
  for (ColState s : basis.state)
    if (s == ColState::basic) ++nbasic;
  if (nbasic != im.m) {
    im.reset_to_logical();
    return;
  }
  im.state = basis.state;
  im.basis_pos.assign(im.ncols, -1);
  int slot = 0;
  for (int j = 0; j < im.ncols; ++j) {
    if (im.state[j] == ColState::basic) {
      im.basic[slot] = j;
      im.basis_pos[j] = slot;
      ++slot;
    } else {
      im.snap_nonbasic(j);
    }
  }
  im.etas.clear();
  if (!im.factorize()) {
    im.reset_to_logical();
    im.factorize();
  }
  im.basics_dirty = true;
}

void Solver::reset_basis() { impl_->reset_to_logical(); }

LpSolution Solver::solve() { return impl_->solve(); }

int Solver::num_rows() const { return impl_->m; }
int Solver::num_structural() const { return impl_->n; }

LpSolution solve_lp(const LpModel& model, const Basis* basis_hint, const SolverConfig& cfg) {
  Solver s(cfg);
  s.load(model);
  if (basis_hint && !basis_hint->empty()) s.install_basis(*basis_hint);
  return s.solve();
}

LpSolution phase1_feasible(const LpModel& model, const SolverConfig& cfg) {
  LpModel copy = model;
  std::fill(copy.objective.begin(), copy.objective.end(), 0.0);
  return solve_lp(copy, nullptr, cfg);
}

}  // namespace pipopt::lp
