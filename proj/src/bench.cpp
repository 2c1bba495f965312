// SPDX-License-Identifier: Apache-2.0
#include "pipopt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pipopt/gen.hpp"
#include "pipopt/oracle.hpp"
#include "pipopt/qp.hpp"
#include "pipopt/reform.hpp"

namespace pipopt::bench {

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double standardized_obj(double obj, double min_obj, double max_obj) {
  if (!(max_obj > min_obj)) return 0.0;  // all methods tied
  return (obj - min_obj) / (max_obj - min_obj) * 100.0;
}

double obj_imp(double init_obj, double method_obj, double min_obj) {
  if (!(init_obj > min_obj)) return method_obj <= init_obj ? 100.0 : 0.0;  // degenerate
  return (init_obj - method_obj) / (init_obj - min_obj) * 100.0;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

BenchConfig parse_config(const std::string& text) {
  BenchConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    std::vector<std::string> vals = split_ws(line.substr(eq + 1));
    auto as_doubles = [&] {
      std::vector<double> v;
      for (const std::string& s : vals) v.push_back(std::stod(s));
      return v;
    };
    auto one_double = [&] {
      if (vals.size() != 1) throw Error("config: " + key + " wants a single value");
      return std::stod(vals[0]);
    };
    if (key == "family") {
      if (vals.size() != 1) throw Error("config: family wants a single value");
      cfg.family = vals[0];
    } else if (key == "sizes" || key == "n") {
      cfg.sizes.clear();
      for (double v : as_doubles()) cfg.sizes.push_back(static_cast<int>(v));
    } else if (key == "pairs" || key == "m") {
      cfg.pair_counts.clear();
      for (double v : as_doubles()) cfg.pair_counts.push_back(static_cast<int>(v));
    } else if (key == "rho") {
      cfg.rho = as_doubles();
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (double v : as_doubles()) cfg.seeds.push_back(static_cast<std::uint64_t>(v));
    } else if (key == "sparsity") {
      cfg.sparsity = one_double();
    } else if (key == "perturbation") {
      cfg.perturbation = one_double();
    } else if (key == "margin") {
      cfg.margin = one_double();
    } else if (key == "qap_files") {
      cfg.qap_files = vals;
    } else if (key == "instances") {
      cfg.instance_files = vals;
    } else if (key == "methods") {
      cfg.methods = vals;
    } else if (key == "time_limit") {
      cfg.time_limit = one_double();
    } else if (key == "sub_time_limit") {
      cfg.sub_time_limit = one_double();
    } else if (key == "fmip_init_budget") {
      cfg.fmip_init_budget = one_double();
    } else if (key == "out_prefix") {
      if (vals.size() != 1) throw Error("config: out_prefix wants a single value");
      cfg.out_prefix = vals[0];
    } else if (key == "oracle_threads") {
      cfg.oracle_threads = static_cast<int>(one_double());
    } else {
      throw Error("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

BenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

InitOutcome initial_triple(const model::LpccInstance& inst, const MethodOptions& opts) {
  auto t0 = Clock::now();
  InitOutcome out;
  if (inst.kind == model::InstanceKind::stqp_kkt || inst.kind == model::InstanceKind::qp_kkt) {
    qp::QpInstance q = inst.kind == model::InstanceKind::stqp_kkt ? gen::stqp_from_lpcc(inst)
                                                                  : qp::from_kkt_lpcc(inst);
    std::vector<double> x0;
    if (inst.kind == model::InstanceKind::stqp_kkt) {
      x0.assign(q.n, 1.0 / q.n);
    } else {
      lp::LpModel feas;
      for (int j = 0; j < q.n; ++j) feas.add_col(0.0, -kInf, kInf);
      for (int i = 0; i < q.m; ++i) {
        std::vector<int> cols;
        std::vector<double> coefs;
        for (int j = 0; j < q.n; ++j)
          if (q.D(i, j) != 0.0) {
            cols.push_back(j);
            coefs.push_back(q.D(i, j));
          }
        feas.add_row(std::move(cols), std::move(coefs), lp::RowSense::ge, q.d[i]);
      }
      lp::LpSolution fs = lp::solve_lp(feas);
      if (fs.status != lp::LpStatus::optimal) throw Error("initial_triple: QP region infeasible");
      x0 = fs.primal;
    }
    qp::StationaryResult st = qp::stationary_point(q, x0);

    // snap onto the complementarity piece implied by the stationary point:
    // for stqp the y side carries x itself, for qp_kkt it carries the slack
    const std::vector<double>& open_y =
        inst.kind == model::InstanceKind::stqp_kkt ? st.triple.x : st.triple.s;
    std::vector<uint8_t> side(inst.m, 0);
    for (int i = 0; i < inst.m; ++i) side[i] = open_y[i] > kPositiveTol ? 0 : 1;
    oracle::PieceResult piece = oracle::solve_piece(inst, side);
    if (piece.status != lp::LpStatus::optimal)
      throw Error("initial_triple: stationary piece is infeasible");
    out.triple = piece.triple;
    out.source = "stationary";
  } else {
    pip::InitSpec spec;
    spec.kind = pip::InitKind::incumbent_from_fmip;
    spec.fmip_budget = opts.fmip_init_budget;
    pip::PipConfig pcfg;
    out.triple = pip::initialize(inst, spec, pcfg).triple;
    out.source = "fmip-incumbent";
  }
  out.objective = model::evaluate_objective(inst, out.triple);
  out.time_s = seconds_since(t0);
  return out;
}

MethodResult run_method(const model::LpccInstance& inst, const std::string& instance_name,
                        const std::string& method, const MethodOptions& opts,
                        const InitOutcome* init) {
  MethodResult res;
  res.record.instance = instance_name;
  res.record.method = method;
  auto t0 = Clock::now();
  try {
    if (method == "stationary") {
      if (!init) throw Error("stationary method needs an initializer");
      res.record.status = "Optimal";
      res.record.objective = init->objective;
      res.record.time_s = init->time_s;
      res.triple = init->triple;
      return res;
    }
    if (method == "oracle") {
      oracle::GlobalResult g = oracle::enumerate_global(inst, std::nullopt, opts.oracle_threads);
      res.record.status = g.feasible ? "Optimal" : "Infeasible";
      if (g.feasible) {
        res.record.objective = g.objective;
        res.triple = g.triple;
      }
      res.record.nodes = static_cast<std::int64_t>(g.patterns_tried);
      res.record.time_s = seconds_since(t0);
      return res;
    }
    if (method == "fmip" || method == "fmip-w") {
      reform::MilpModel full = reform::build_full_milp(inst);
      bb::BbConfig engine;
      engine.time_limit = opts.time_limit;
      std::optional<reform::ModelSolution> warm;
      double init_time = 0.0;
      if (method == "fmip-w") {
        if (!init) throw Error("fmip-w needs an initializer");
        warm = reform::embed_triple(full, init->triple);
        init_time = init->time_s;
      }
      bb::SolveOutcome out = bb::solve_milp(full, warm, engine);
      res.record.status = bb::to_string(out.status);
      if (out.incumbent) {
        res.record.objective = out.incumbent->objective;
        res.triple = reform::extract_triple(full, *out.incumbent);
      }
      res.record.nodes = out.nodes_explored;
      res.record.gap = std::isfinite(out.gap) ? out.gap : -1.0;
      res.record.time_s = seconds_since(t0) + init_time;
      return res;
    }
    if (method.rfind("pip", 0) == 0) {
      auto colon = method.find(':');
      if (colon == std::string::npos) throw Error("pip method tag needs p_max, e.g. pip:0.9");
      double p_max = std::stod(method.substr(colon + 1));
      if (!init) throw Error("pip needs an initializer");
      pip::PipConfig cfg;
      cfg.p_max = p_max;
      cfg.sub_time_limit = opts.sub_time_limit;
      pip::PipResult out = pip::run_pip(inst, init->triple, cfg);
      res.record.status = "Terminated";
      res.record.objective = out.objective;
      res.record.time_s = seconds_since(t0) + init->time_s;
      res.trace_jsonl = pip::trace_to_jsonl(out.trace);
      res.triple = out.triple;
      return res;
    }
    throw Error("unknown method tag: " + method);
  } catch (const std::exception& ex) {
    res.record.status = std::string("Error: ") + ex.what();
    res.record.time_s = seconds_since(t0);
    return res;
  }
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct NamedInstance {
  std::string name;
  model::LpccInstance inst;
};

std::vector<NamedInstance> make_instances(const BenchConfig& cfg) {
  std::vector<NamedInstance> out;
  if (cfg.family == "stqp") {
    std::vector<int> sizes = cfg.sizes.empty() ? std::vector<int>{10} : cfg.sizes;
    for (int n : sizes)
      for (double rho : cfg.rho)
        for (std::uint64_t seed : cfg.seeds) {
          qp::QpInstance q = gen::gen_stqp(n, rho, seed);
          std::ostringstream name;
          name << "stqp-n" << n << "-rho" << rho << "-s" << seed;
          out.push_back({name.str(), gen::stqp_to_lpcc(q)});
        }
  } else if (cfg.family == "invqp") {
    std::vector<int> sizes = cfg.sizes.empty() ? std::vector<int>{4} : cfg.sizes;
    std::vector<int> pairs = cfg.pair_counts.empty() ? std::vector<int>{6} : cfg.pair_counts;
    for (size_t t = 0; t < std::max(sizes.size(), pairs.size()); ++t) {
      int n = sizes[std::min(t, sizes.size() - 1)];
      int m = pairs[std::min(t, pairs.size() - 1)];
      for (std::uint64_t seed : cfg.seeds) {
        gen::InvQpInstance gi = gen::gen_invqp(m, n, seed, cfg.sparsity, cfg.perturbation);
        std::ostringstream name;
        name << "invqp-m" << m << "-n" << n << "-s" << seed;
        out.push_back({name.str(), gi.lpcc});
      }
    }
  } else if (cfg.family == "qap") {
    for (const std::string& path : cfg.qap_files) {
      gen::QapData q = gen::load_qaplib(path);
      std::ostringstream name;
      name << "qap-" << std::filesystem::path(path).stem().string();
      out.push_back({name.str(), gen::qap_lift_lpcc(q, cfg.margin)});
    }
  } else if (cfg.family == "files") {
    for (const std::string& path : cfg.instance_files) {
      std::ostringstream name;
      name << std::filesystem::path(path).stem().string();
      out.push_back({name.str(), model::load_instance(path)});
    }
  } else {
    throw Error("bench: unknown family '" + cfg.family + "'");
  }
  return out;
}

}  // namespace

std::vector<RunRecord> run_bench(const BenchConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<NamedInstance> instances = make_instances(cfg);

  MethodOptions opts;
  opts.time_limit = cfg.time_limit;
  opts.sub_time_limit = cfg.sub_time_limit;
  opts.fmip_init_budget = cfg.fmip_init_budget;
  opts.oracle_threads = cfg.oracle_threads;

  bool needs_init = false;
  for (const std::string& mth : cfg.methods)
    if (mth == "stationary" || mth == "fmip-w" || mth.rfind("pip", 0) == 0) needs_init = true;

  std::vector<RunRecord> records;
  for (const NamedInstance& ni : instances) {
    std::optional<InitOutcome> init;
    if (needs_init) {
      try {
        init = initial_triple(ni.inst, opts);
      } catch (const std::exception& ex) {
        RunRecord rec;
        rec.instance = ni.name;
        rec.method = "init";
        rec.status = std::string("Error: ") + ex.what();
        records.push_back(rec);
      }
    }
    for (const std::string& mth : cfg.methods) {
      MethodResult mr = run_method(ni.inst, ni.name, mth, opts, init ? &*init : nullptr);
      records.push_back(mr.record);
      if (!mr.trace_jsonl.empty()) {
        std::string fname = out_dir + "/" + cfg.out_prefix + "_" + ni.name + "_" + mth + ".trace";
        std::replace(fname.begin(), fname.end(), ':', '_');
        std::ofstream tf(fname);
        tf << mr.trace_jsonl;
      }
    }
  }

  std::ofstream csv(out_dir + "/" + cfg.out_prefix + "_runs.csv");
  csv << records_to_csv(records);
  std::ofstream sum(out_dir + "/" + cfg.out_prefix + "_summary.txt");
  sum << summary_report(records);
  return records;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "instance,method,status,objective,time_s,nodes,gap\n";
  for (const RunRecord& r : records) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << r.instance << "," << r.method << "," << status << ","
        << (r.objective ? fmt_double(*r.objective) : "") << "," << fmt_double(r.time_s) << ","
        << r.nodes << "," << fmt_double(r.gap) << "\n";
  }
  return out.str();
}

std::vector<RunRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("records_from_csv: empty input");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 7) throw Error("records_from_csv: malformed row: " + line);
    RunRecord r;
    r.instance = cells[0];
    r.method = cells[1];
    r.status = cells[2];
    if (!cells[3].empty()) r.objective = std::stod(cells[3]);
    r.time_s = std::stod(cells[4]);
    r.nodes = std::stoll(cells[5]);
    r.gap = std::stod(cells[6]);
    out.push_back(r);
  }
  return out;
}

std::string summary_report(const std::vector<RunRecord>& records) {
  // per-instance extremes over methods that produced objectives
  std::map<std::string, std::pair<double, double>> extremes;  // min, max
  std::map<std::string, double> init_obj;
  for (const RunRecord& r : records) {
    if (!r.objective) continue;
    auto it = extremes.find(r.instance);
    if (it == extremes.end())
      extremes[r.instance] = {*r.objective, *r.objective};
    else {
      it->second.first = std::min(it->second.first, *r.objective);
      it->second.second = std::max(it->second.second, *r.objective);
    }
    if (r.method == "stationary") init_obj[r.instance] = *r.objective;
  }

  struct Agg {
    double std_sum = 0.0;
    double time_sum = 0.0;
    double imp_sum = 0.0;
    int count = 0;
    int imp_count = 0;
  };
  std::map<std::string, Agg> by_method;
  std::vector<std::string> method_order;
  for (const RunRecord& r : records) {
    if (!by_method.count(r.method)) method_order.push_back(r.method);
    Agg& a = by_method[r.method];
    a.time_sum += r.time_s;
    if (r.objective && extremes.count(r.instance)) {
      auto [lo, hi] = extremes[r.instance];
      a.std_sum += standardized_obj(*r.objective, lo, hi);
      ++a.count;
      if (init_obj.count(r.instance) && r.method != "stationary") {
        a.imp_sum += obj_imp(init_obj[r.instance], *r.objective, lo);
        ++a.imp_count;
      }
    }
  }

  std::ostringstream out;
  out << "method\tmean_std_obj\tmean_time_s\tobj_imp_pct\truns\n";
  for (const std::string& mth : method_order) {
    const Agg& a = by_method[mth];
    out << mth << "\t";
    out << (a.count ? fmt_double(a.std_sum / a.count) : std::string("-")) << "\t";
    int total_runs = 0;
    for (const RunRecord& r : records)
      if (r.method == mth) ++total_runs;
    out << fmt_double(total_runs ? a.time_sum / total_runs : 0.0) << "\t";
    out << (a.imp_count ? fmt_double(a.imp_sum / a.imp_count) : std::string("-")) << "\t";
    out << total_runs << "\n";
  }
  return out.str();
}

}  // namespace pipopt::bench
