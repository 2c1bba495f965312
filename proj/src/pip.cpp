// SPDX-License-Identifier: Apache-2.0
#include "pipopt/pip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pipopt/reform.hpp"

namespace pipopt::pip {

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void PipConfig::validate() const {
  if (!(p_max > 0.0 && p_max < 1.0)) throw Error("PipConfig: p_max must lie in (0,1)");
  if (r_max < 1) throw Error("PipConfig: r_max must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("PipConfig: alpha must lie in (0,1)");
  if (!(p0 > 1.0 - p_max - 1e-12 && p0 < 1.0))
    throw Error("PipConfig: p0 must lie in (1 - p_max, 1)");
}

double PipConfig::effective_sub_time_limit(int pairs) const {
  if (sub_time_limit > 0.0) return sub_time_limit;
  return pairs < 900 ? 60.0 : 600.0;
}

int iteration_bound(const PipConfig& cfg) {
  int levels = static_cast<int>(std::ceil((cfg.p0 - (1.0 - cfg.p_max)) / cfg.alpha - 1e-9)) + 1;
  return cfg.r_max * levels;
}

InitResult initialize(const model::LpccInstance& inst, const InitSpec& spec,
                      const PipConfig& cfg) {
  switch (spec.kind) {
    case InitKind::given_triple: {
      model::FeasibilityReport rep = model::check_feasible(inst, spec.seed, cfg.feas_tol);
      if (!rep.within(cfg.feas_tol)) throw Error("initialize: given triple is infeasible");
      return {spec.seed, true};
    }
    case InitKind::incumbent_from_fmip: {
      reform::MilpModel full = reform::build_full_milp(inst);
      bb::BbConfig engine = cfg.engine;
      engine.time_limit = spec.fmip_budget;
      bb::SolveOutcome out = bb::solve_milp(full, std::nullopt, engine);
      if (out.status == bb::SolveStatus::infeasible) throw Error("initialize: LPCC is infeasible");
      if (out.status == bb::SolveStatus::unbounded) throw Error("initialize: LPCC is unbounded");
      if (!out.incumbent)
        throw Error("initialize: no incumbent within the FMIP budget");
      return {reform::extract_triple(full, *out.incumbent), true};
    }
    case InitKind::infeasible_seed:
      return {spec.seed, false};
  }
  throw Error("initialize: unknown mode");
}

PipResult run_pip(const model::LpccInstance& inst, const model::PointTriple& start,
                  const PipConfig& cfg) {
  InitSpec spec;
  spec.kind = InitKind::given_triple;
  spec.seed = start;
  return run_pip(inst, spec, cfg);
}

PipResult run_pip(const model::LpccInstance& inst, const InitSpec& init, const PipConfig& cfg) {
  cfg.validate();
  inst.validate();
  auto t0 = Clock::now();

  InitResult state = initialize(inst, init, cfg);
  model::PointTriple current = state.triple;
  bool accepted = state.accepted;
  double current_obj = accepted ? model::evaluate_objective(inst, current) : kInf;

  PipResult result;
  double p = cfg.p0;
  int r = 1;
  int iter = 0;
  const int max_iters = iteration_bound(cfg) + 1;

  while (p >= 1.0 - cfg.p_max - 1e-12) {
    auto it_start = Clock::now();
    ++iter;
    if (iter > max_iters)
      throw Error("run_pip: iteration bound exceeded (internal schedule bug)");

    model::IndexPartition part = model::complement_partition(current, p, cfg.pos_tol);
    part.validate(inst.m);
    // index-set condition w.r.t. the current triple
    for (int i : part.m_y_plus)
      if (!(current.y[i] > cfg.pos_tol)) throw Error("run_pip: partition violates the y-side condition");
    for (int i : part.m_z_plus)
      if (!(current.z[i] > cfg.pos_tol)) throw Error("run_pip: partition violates the z-side condition");

    reform::MilpModel sub = reform::build_partial_milp(inst, part);
    std::optional<reform::ModelSolution> warm;
    if (accepted) warm = reform::embed_triple(sub, current, cfg.pos_tol);

    bb::BbConfig engine = cfg.engine;
    engine.time_limit = cfg.effective_sub_time_limit(inst.m);
    bb::SolveOutcome out;
    try {
      out = bb::solve_milp(sub, warm, engine);
    } catch (const bb::WarmStartError& ex) {
      throw Error(std::string("run_pip: previous iterate rejected as warm start (internal): ") +
                  ex.what());
    }

    if (out.status == bb::SolveStatus::unbounded)
      throw Error("run_pip: partial problem unbounded; instance violates its big-M contract");
    if (out.status == bb::SolveStatus::infeasible) {
      if (accepted)
        throw Error("run_pip: partial problem infeasible although the iterate is feasible");
      throw Error("run_pip: first partial problem infeasible for the given seed");
    }
    if (!out.incumbent) {
      if (accepted)
        throw Error("run_pip: subproblem lost its warm-started incumbent (internal)");
      throw Error("run_pip: cold first subproblem found no incumbent within its budget");
    }

    model::PointTriple candidate = reform::extract_triple(sub, *out.incumbent);
    double candidate_obj = out.incumbent->objective;
    if (accepted && candidate_obj > current_obj + 1e-9)
      throw Error("run_pip: subproblem incumbent worse than its warm start (internal)");

    model::FeasibilityReport rep = model::check_feasible(inst, candidate, cfg.feas_tol);
    if (!rep.within(cfg.feas_tol))
      throw Error("run_pip: subproblem returned an LPCC-infeasible point");

    bool improved = candidate_obj < current_obj - 1e-9;
    current = std::move(candidate);
    current_obj = candidate_obj;
    accepted = true;

    PipIteration rec;
    rec.iter = iter;
    rec.p = p;
    rec.r = r;
    rec.n_y_plus = static_cast<int>(part.m_y_plus.size());
    rec.n_z_plus = static_cast<int>(part.m_z_plus.size());
    rec.n_c = static_cast<int>(part.m_c.size());
    rec.sub_status = out.status;
    rec.objective = current_obj;
    rec.time_s = seconds_since(it_start);
    result.trace.iterations.push_back(rec);

    if (!improved || r >= cfg.r_max) {
      r = 1;
      p -= cfg.alpha;
    } else {
      ++r;
    }
  }

  if (!accepted) throw Error("run_pip: schedule ended before any subproblem ran");

  result.triple = current;
  result.objective = current_obj;
  result.trace.final_status = "Terminated";
  if (cfg.certify_final)
    result.certified_local_min = certify_local_min(inst, current, cfg.engine, cfg.pos_tol);
  result.trace.total_time = seconds_since(t0);
  return result;
}

Certificate certify_local_min(const model::LpccInstance& inst, const model::PointTriple& triple,
                              const bb::BbConfig& engine, double pos_tol) {
  model::FeasibilityReport rep = model::check_feasible(inst, triple, 1e-7);
  if (!rep.within(1e-7)) throw Error("certify_local_min: triple is not feasible");

  model::IndexPartition part = model::complement_partition(triple, 1.0, pos_tol);
  reform::MilpModel sub = reform::build_partial_milp(inst, part);
  reform::ModelSolution warm = reform::embed_triple(sub, triple, pos_tol);
  bb::SolveOutcome out = bb::solve_milp(sub, warm, engine);
  if (out.status == bb::SolveStatus::optimal)
    return out.incumbent->objective >= model::evaluate_objective(inst, triple) - 1e-8
               ? Certificate::certified
               : Certificate::not_certified;
  if (out.incumbent &&
      out.incumbent->objective < model::evaluate_objective(inst, triple) - 1e-8)
    return Certificate::not_certified;  // a strictly better point disproves local optimality
  return Certificate::indeterminate;    // timed out without proof
}

std::string trace_to_jsonl(const PipTrace& trace) {
  std::ostringstream out;
  for (const PipIteration& it : trace.iterations) {
    nlohmann::json j;
    j["iter"] = it.iter;
    j["p"] = it.p;
    j["r"] = it.r;
    j["n_y_plus"] = it.n_y_plus;
    j["n_z_plus"] = it.n_z_plus;
    j["n_c"] = it.n_c;
    j["status"] = bb::to_string(it.sub_status);
    j["objective"] = it.objective;
    j["time_s"] = it.time_s;
    out << j.dump() << "\n";
  }
  return out.str();
}

}  // namespace pipopt::pip
