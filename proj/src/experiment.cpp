#include "mcover/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "mcover/brute_force.hpp"
#include "mcover/ccf_solver.hpp"
#include "mcover/flmo_solver.hpp"
#include "mcover/reports.hpp"

namespace mcover {

namespace {

std::unique_ptr<FullCoverOracle> make_oracle(const SolverParams& p) {
  if (p.oracle == "threshold") return std::make_unique<ThresholdOracle>(p.oracle_k);
  if (p.oracle == "generic") return std::make_unique<GenericOracle>();
  throw std::invalid_argument("unknown oracle '" + p.oracle + "'");
}

std::vector<bool> flags_from(const Json& list, std::size_t r, const char* key = nullptr) {
  std::vector<bool> out(r, false);
  for (const auto& v : list) {
    const std::size_t i = key ? v.at(key).get<std::size_t>() : v.get<std::size_t>();
    if (i < r) out[i] = true;
  }
  return out;
}

// Per-constraint misses and the stage cost breakdown, read back from a solve report.
void digest_report(const Json& rep, TrialRecord& rec) {
  const Json& res = rep["result"];
  const std::string problem = rep["problem"];
  rec.cost = res["cost"].get<double>();
  if (problem == "msc") {
    const auto& values = res["values"];
    const auto& req = res["requirements"];
    const std::size_t r = req.size();
    rec.rounding_miss = rep["stages"].empty()
                            ? std::vector<bool>(r, false)
                            : flags_from(rep["stages"][0]["fix"]["constraints"], r);
    for (std::size_t i = 0; i < r; ++i) {
      rec.final_miss.push_back(values[i].get<double>() < req[i].get<double>() - kCoverTol);
    }
    Json costs = {{"pre", 0}, {"rounding", 0}, {"fix", 0}};
    for (const auto& st : rep["stages"]) {
      for (const char* k : {"pre", "rounding", "fix"}) {
        costs[k] = costs[k].get<Cost>() + st["costs"][k].get<Cost>();
      }
    }
    rec.stage_costs = std::move(costs);
  } else if (problem == "ccf") {
    const auto& cov = res["coverage"];
    const auto& req = res["requirements"];
    const std::size_t r = req.size();
    rec.rounding_miss = flags_from(rep["stages"]["fix"], r, "constraint");
    for (std::size_t i = 0; i < r; ++i) {
      rec.final_miss.push_back(cov[i].get<double>() < req[i].get<double>() - kCoverTol);
    }
    rec.stage_costs = rep["stages"]["costs"];
  } else {
    const auto& served = res["served"];
    const auto& req = res["requirements"];
    const auto& met = rep["stages"]["shallow"]["met"];
    for (std::size_t k = 0; k < req.size(); ++k) {
      rec.rounding_miss.push_back(k < met.size() && !met[k].get<bool>());
      rec.final_miss.push_back(served[k].get<std::size_t>() < req[k].get<std::size_t>());
    }
    rec.stage_costs = {{"heavy", rep["stages"]["heavy"]["cost"]}, {"total", rec.cost}};
  }
}

std::string fixed(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

Json to_json(const ExperimentSpec& s) {
  Json j = {{"problem", to_string(s.problem)}, {"family", s.family}, {"seed", s.seed}};
  if (s.problem == ProblemKind::flmo) {
    j["size"] = {{"facilities", s.flmo.facilities}, {"clients", s.flmo.clients}, {"r", s.flmo.r},
                 {"side", s.flmo.side}, {"open_min", s.flmo.open_min}, {"open_max", s.flmo.open_max},
                 {"color_prob", s.flmo.color_prob}, {"demand", s.flmo.demand}};
  } else {
    const auto& c = s.coverage;
    j["size"] = {{"n", c.n}, {"points", c.points}, {"r", c.r}, {"cost_min", c.cost_min},
                 {"cost_max", c.cost_max}, {"density", c.density}, {"demand", c.demand},
                 {"weight_max", c.weight_max}};
    if (s.family == "planted_optimum") j["planted_size"] = s.planted_size;
  }
  return j;
}

Json to_json(const SolverParams& p) {
  Json j = {{"eps", p.eps}, {"guess_mode", to_string(p.guess.mode)}};
  j["L_override"] = p.guess.L_override ? Json(*p.guess.L_override) : Json(nullptr);
  j["alpha"] = p.alpha;
  j["oracle"] = p.oracle;
  j["oracle_k"] = p.oracle_k;
  return j;
}

LoadedInstance generate_instance(const ExperimentSpec& spec, RngStream& rng) {
  LoadedInstance out;
  out.kind = spec.problem;
  const std::string& fam = spec.family;
  switch (spec.problem) {
    case ProblemKind::msc:
      if (fam == "random_coverage") {
        out.msc = random_coverage_msc(spec.coverage, rng);
      } else if (fam == "planted_optimum") {
        PlantedMsc p = planted_optimum_msc(spec.coverage, spec.planted_size, rng);
        out.msc = std::move(p.instance);
        out.planted = p.planted;
        out.planted_cost = p.planted_cost;
      } else {
        throw std::invalid_argument("family '" + fam + "' does not generate MSC instances");
      }
      break;
    case ProblemKind::ccf:
      if (fam == "random_coverage") {
        out.ccf = random_ccf(spec.coverage, rng);
      } else if (fam == "vertex_cover_like") {
        out.ccf = vertex_cover_like(spec.coverage, rng);
      } else {
        throw std::invalid_argument("family '" + fam + "' does not generate CCF instances");
      }
      break;
    case ProblemKind::flmo:
      if (fam != "random_metric_flmo") {
        throw std::invalid_argument("family '" + fam + "' does not generate FLMO instances");
      }
      out.flmo = random_metric_flmo(spec.flmo, rng);
      break;
  }
  return out;
}

Json solve_report(const LoadedInstance& inst, const Json& instance, const SolverParams& params,
                  RngStream& rng) {
  switch (inst.kind) {
    case ProblemKind::msc: {
      const MscSolveReport rep =
          params.alpha <= 1 ? solve_msc_single(inst.msc, params.eps, params.guess, rng)
                            : solve_msc_multi(inst.msc, params.alpha, params.eps, params.guess, rng);
      return msc_report(instance, rep);
    }
    case ProblemKind::ccf: {
      const auto oracle = make_oracle(params);
      return ccf_report(instance, solve_ccf(inst.ccf, params.eps, *oracle, params.guess, rng));
    }
    case ProblemKind::flmo:
      return flmo_report(instance, solve_flmo(inst.flmo, params.eps, params.guess, rng));
  }
  return {};
}

std::optional<double> brute_force_opt(const LoadedInstance& inst) {
  switch (inst.kind) {
    case ProblemKind::msc: {
      const auto bf = brute_force_msc(inst.msc);
      if (!bf.feasible) return std::nullopt;
      return static_cast<double>(bf.cost);
    }
    case ProblemKind::ccf: {
      const auto bf = brute_force_ccf(inst.ccf);
      if (!bf.feasible) return std::nullopt;
      return static_cast<double>(bf.cost);
    }
    case ProblemKind::flmo: {
      const auto bf = brute_force_flmo(inst.flmo);
      if (!bf.feasible) return std::nullopt;
      return bf.cost;
    }
  }
  return std::nullopt;
}

ExperimentAggregate aggregate(const std::vector<TrialRecord>& records) {
  ExperimentAggregate a;
  a.trials = records.size();
  std::vector<double> ratios;
  double cost_sum = 0.0;
  std::vector<std::size_t> round_miss, final_miss;
  for (const auto& rec : records) {
    if (!rec.ok) {
      ++a.errors;
      continue;
    }
    ++a.solved;
    if (!rec.hard_ok) ++a.hard_failures;
    if (rec.planted_cost && rec.opt && *rec.opt > static_cast<double>(*rec.planted_cost) + 1e-9) {
      ++a.planted_violations;
    }
    cost_sum += rec.cost;
    if (rec.ratio) ratios.push_back(*rec.ratio);
    round_miss.resize(std::max(round_miss.size(), rec.rounding_miss.size()), 0);
    final_miss.resize(std::max(final_miss.size(), rec.final_miss.size()), 0);
    for (std::size_t i = 0; i < rec.rounding_miss.size(); ++i) round_miss[i] += rec.rounding_miss[i];
    for (std::size_t i = 0; i < rec.final_miss.size(); ++i) final_miss[i] += rec.final_miss[i];
  }
  if (a.solved > 0) a.mean_cost = cost_sum / static_cast<double>(a.solved);
  a.ratio_count = ratios.size();
  if (!ratios.empty()) {
    double sum = 0.0;
    for (double r : ratios) {
      sum += r;
      a.max_ratio = std::max(a.max_ratio, r);
    }
    a.mean_ratio = sum / static_cast<double>(ratios.size());
    if (ratios.size() > 1) {
      double ss = 0.0;
      for (double r : ratios) ss += (r - a.mean_ratio) * (r - a.mean_ratio);
      a.sd_ratio = std::sqrt(ss / static_cast<double>(ratios.size() - 1));
      a.se_ratio = a.sd_ratio / std::sqrt(static_cast<double>(ratios.size()));
    }
  }
  const double denom = a.solved > 0 ? static_cast<double>(a.solved) : 1.0;
  for (auto c : round_miss) a.rounding_miss_rate.push_back(static_cast<double>(c) / denom);
  for (auto c : final_miss) a.final_miss_rate.push_back(static_cast<double>(c) / denom);
  return a;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const SolverParams& params,
                                std::size_t trials, bool with_opt) {
  ExperimentReport rep;
  rep.spec = spec;
  rep.params = params;
  rep.records.resize(trials);
  const RngStream root(spec.seed);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(trials); ++ti) {
    const auto t = static_cast<std::size_t>(ti);
    TrialRecord& rec = rep.records[t];
    rec.trial = t;
    const RngStream trial = root.split(t);
    RngStream inst_rng = trial.split(0);
    RngStream solver_rng = trial.split(1);
    rec.instance_seed = inst_rng.seed();
    rec.solver_seed = solver_rng.seed();
    try {
      const LoadedInstance inst = generate_instance(spec, inst_rng);
      const Json inst_json = instance_to_json(inst);
      rec.planted_cost = inst.planted_cost;
      if (with_opt) rec.opt = brute_force_opt(inst);
      rec.report = solve_report(inst, inst_json, params, solver_rng);
      rec.ok = true;
      rec.hard_ok = hard_asserts_pass(rec.report);
      digest_report(rec.report, rec);
      if (rec.opt) {
        if (*rec.opt > 0.0) {
          rec.ratio = rec.cost / *rec.opt;
        } else if (rec.cost == 0.0) {
          rec.ratio = 1.0;
        }
      }
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  }
  rep.aggregate = aggregate(rep.records);
  return rep;
}

Json to_json(const ExperimentReport& rep, bool with_reports) {
  Json trials = Json::array();
  for (const auto& r : rep.records) {
    Json t = {{"trial", r.trial},
              {"instance_seed", r.instance_seed},
              {"solver_seed", r.solver_seed},
              {"ok", r.ok}};
    if (!r.ok) {
      t["error"] = r.error;
    } else {
      t["hard_ok"] = r.hard_ok;
      t["cost"] = r.cost;
      t["opt"] = r.opt ? Json(*r.opt) : Json(nullptr);
      t["ratio"] = r.ratio ? Json(*r.ratio) : Json(nullptr);
      if (r.planted_cost) t["planted_cost"] = *r.planted_cost;
      t["rounding_miss"] = r.rounding_miss;
      t["final_miss"] = r.final_miss;
      t["stage_costs"] = r.stage_costs;
      if (with_reports) t["report"] = r.report;
    }
    trials.push_back(std::move(t));
  }
  const auto& a = rep.aggregate;
  Json agg = {{"trials", a.trials},
              {"solved", a.solved},
              {"errors", a.errors},
              {"hard_failures", a.hard_failures},
              {"planted_violations", a.planted_violations},
              {"ratio_count", a.ratio_count},
              {"mean_ratio", a.mean_ratio},
              {"sd_ratio", a.sd_ratio},
              {"se_ratio", a.se_ratio},
              {"max_ratio", a.max_ratio},
              {"mean_cost", a.mean_cost},
              {"rounding_miss_rate", a.rounding_miss_rate},
              {"final_miss_rate", a.final_miss_rate}};
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "experiment"},
          {"spec", to_json(rep.spec)},
          {"params", to_json(rep.params)},
          {"trials", std::move(trials)},
          {"aggregate", std::move(agg)}};
}

std::string to_table(const ExperimentReport& rep) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%6s  %-6s  %12s  %12s  %8s  %-4s  %s\n", "trial", "status",
                "cost", "opt", "ratio", "hard", "misses");
  os << line;
  for (const auto& r : rep.records) {
    std::string misses;
    for (bool m : r.final_miss) misses += m ? '1' : '0';
    std::snprintf(line, sizeof line, "%6zu  %-6s  %12s  %12s  %8s  %-4s  %s\n", r.trial,
                  r.ok ? "ok" : "error", r.ok ? fixed(r.cost, 3).c_str() : "-",
                  r.opt ? fixed(*r.opt, 3).c_str() : "-", r.ratio ? fixed(*r.ratio, 4).c_str() : "-",
                  r.ok ? (r.hard_ok ? "pass" : "FAIL") : "-", r.ok ? misses.c_str() : r.error.c_str());
    os << line;
  }
  const auto& a = rep.aggregate;
  os << "\n";
  std::snprintf(line, sizeof line, "%-20s %zu solved / %zu trials, %zu errors, %zu hard failures\n",
                "trials", a.solved, a.trials, a.errors, a.hard_failures);
  os << line;
  std::snprintf(line, sizeof line, "%-20s mean %.4f  sd %.4f  se %.4f  max %.4f  (n=%zu)\n",
                "ratio cost/OPT", a.mean_ratio, a.sd_ratio, a.se_ratio, a.max_ratio, a.ratio_count);
  os << line;
  auto rates = [&](const char* label, const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : "  ") + fixed(x, 4);
    std::snprintf(line, sizeof line, "%-20s %s\n", label, s.c_str());
    os << line;
  };
  rates("rounding miss rate", a.rounding_miss_rate);
  rates("final miss rate", a.final_miss_rate);
  return os.str();
}

}  // namespace mcover
