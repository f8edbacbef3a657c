#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mcover/acceptance.hpp"
#include "mcover/brute_force.hpp"
#include "mcover/errors.hpp"
#include "mcover/experiment.hpp"
#include "mcover/instance_io.hpp"
#include "mcover/reports.hpp"

using namespace mcover;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string report;
  bool timing = false;
};

struct SolveOpts {
  std::string instance;
  double eps = 0.25;
  std::size_t alpha = 1;
  std::string guess_mode = "oracle_assisted";
  std::optional<std::size_t> L_override;
  std::string oracle = "threshold";
  std::size_t oracle_k = 2;
};

void emit(const Json& j, const Common& c) {
  if (c.report.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(c.report, j);
  }
}

SolverParams solver_params(const SolveOpts& o) {
  SolverParams p;
  p.eps = o.eps;
  p.alpha = o.alpha;
  p.guess.mode = parse_guess_mode(o.guess_mode);
  p.guess.L_override = o.L_override;
  p.oracle = o.oracle;
  p.oracle_k = o.oracle_k;
  return p;
}

int solve(ProblemKind kind, const SolveOpts& o, const Common& c) {
  const LoadedInstance inst = read_instance_file(o.instance);
  if (inst.kind != kind) {
    throw std::invalid_argument(o.instance + " holds a " + to_string(inst.kind) + " instance");
  }
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(c.seed);
  Json rep = solve_report(inst, instance_to_json(inst), solver_params(o), rng);
  if (c.timing) {
    rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  emit(rep, c);
  const bool ok = hard_asserts_pass(rep);
  std::fprintf(stderr, "%s cost %s, hard asserts %s\n", to_string(kind), rep["result"]["cost"].dump().c_str(),
               ok ? "passed" : "FAILED");
  return ok ? 0 : 1;
}

void add_solver_flags(CLI::App* sub, SolveOpts& o, Common& c, bool eps_star) {
  sub->add_option("--instance", o.instance, "Instance JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("--eps", o.eps, eps_star ? "Target epsilon* of the cost bound" : "Accuracy epsilon")
      ->capture_default_str()
      ->check(CLI::Range(1e-6, 0.999999));
  sub->add_option("--guess-mode", o.guess_mode, "oracle_assisted, heuristic_topcost or exact_enumeration")
      ->capture_default_str();
  sub->add_option("--L-override", o.L_override, "Guess this many elements instead of the theoretical count");
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--report", c.report, "Write the JSON report here instead of stdout");
  sub->add_flag("--timing", c.timing, "Add wall time to the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Submodular, colorful and facility-location covering solvers"};
  app.require_subcommand(1);
  Common common;

  auto* gen = app.add_subcommand("gen-instance", "Generate a random instance");
  ExperimentSpec spec;
  std::string problem = "msc";
  gen->add_option("--problem", problem, "msc, ccf or flmo")->capture_default_str();
  gen->add_option("--family", spec.family,
                  "random_coverage, planted_optimum, vertex_cover_like or random_metric_flmo")
      ->capture_default_str();
  gen->add_option("--n", spec.coverage.n, "Elements (MSC) or sets (CCF)")->capture_default_str();
  gen->add_option("--points", spec.coverage.points, "Points per coverage function")->capture_default_str();
  gen->add_option("--r", spec.coverage.r, "Constraints")->capture_default_str();
  gen->add_option("--planted-size", spec.planted_size, "Planted set size")->capture_default_str();
  gen->add_option("--facilities", spec.flmo.facilities)->capture_default_str();
  gen->add_option("--clients", spec.flmo.clients)->capture_default_str();
  gen->add_option("--colors", spec.flmo.r, "FLMO color classes")->capture_default_str();
  gen->add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", common.report, "Write the instance here instead of stdout");

  SolveOpts msc_o, ccf_o, flmo_o;
  auto* smsc = app.add_subcommand("solve-msc", "Bi-criteria submodular cover");
  add_solver_flags(smsc, msc_o, common, false);
  smsc->add_option("--alpha", msc_o.alpha, "Rounds; coverage 1 - e^-alpha - eps")->capture_default_str();

  auto* sccf = app.add_subcommand("solve-ccf", "Covering coverage functions");
  add_solver_flags(sccf, ccf_o, common, true);
  sccf->add_option("--oracle", ccf_o.oracle, "threshold or generic")->capture_default_str();
  sccf->add_option("--k", ccf_o.oracle_k, "Threshold oracle frequency bound")->capture_default_str();

  auto* sflmo = app.add_subcommand("solve-flmo", "Facility location with multiple outliers");
  add_solver_flags(sflmo, flmo_o, common, false);

  auto* brute = app.add_subcommand("brute-force", "Exhaustive optimum of a small instance");
  std::string brute_instance;
  brute->add_option("--instance", brute_instance)->required()->check(CLI::ExistingFile);
  brute->add_option("--report", common.report, "Write the JSON result here instead of stdout");

  auto* bench = app.add_subcommand("bench", "Acceptance suite or a seeded experiment batch");
  std::string suite = "acceptance";
  std::vector<int> criteria;
  std::size_t trials = 20;
  SolveOpts bench_o;
  bench->add_option("--suite", suite, "acceptance or experiment")->capture_default_str();
  bench->add_option("--criteria", criteria, "Acceptance criteria to run (default all)");
  bench->add_option("--problem", problem, "Experiment problem: msc, ccf or flmo")->capture_default_str();
  bench->add_option("--family", spec.family, "Experiment generator family")->capture_default_str();
  bench->add_option("--n", spec.coverage.n)->capture_default_str();
  bench->add_option("--points", spec.coverage.points)->capture_default_str();
  bench->add_option("--r", spec.coverage.r)->capture_default_str();
  bench->add_option("--facilities", spec.flmo.facilities)->capture_default_str();
  bench->add_option("--clients", spec.flmo.clients)->capture_default_str();
  bench->add_option("--colors", spec.flmo.r)->capture_default_str();
  bench->add_option("--trials", trials)->capture_default_str();
  bench->add_option("--eps", bench_o.eps)->capture_default_str();
  bench->add_option("--alpha", bench_o.alpha)->capture_default_str();
  bench->add_option("--guess-mode", bench_o.guess_mode)->capture_default_str();
  bench->add_option("--L-override", bench_o.L_override);
  bench->add_option("--oracle", bench_o.oracle)->capture_default_str();
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("--seed", bench_seed, "RNG seed (acceptance default " + std::to_string(kAcceptanceSeed) + ")");
  bench->add_option("--report", common.report, "Write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share the "bad input" code.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      spec.problem = parse_problem_kind(problem);
      if (spec.problem == ProblemKind::flmo && spec.family == "random_coverage") spec.family = "random_metric_flmo";
      RngStream rng(common.seed);
      const Json j = instance_to_json(generate_instance(spec, rng));
      emit(j, common);
      return 0;
    }
    if (smsc->parsed()) return solve(ProblemKind::msc, msc_o, common);
    if (sccf->parsed()) return solve(ProblemKind::ccf, ccf_o, common);
    if (sflmo->parsed()) return solve(ProblemKind::flmo, flmo_o, common);
    if (brute->parsed()) {
      const LoadedInstance inst = read_instance_file(brute_instance);
      const Json ij = instance_to_json(inst);
      Json rep;
      switch (inst.kind) {
        case ProblemKind::msc: rep = brute_force_report(ij, brute_force_msc(inst.msc)); break;
        case ProblemKind::ccf: rep = brute_force_report(ij, brute_force_ccf(inst.ccf)); break;
        case ProblemKind::flmo: rep = brute_force_report(ij, brute_force_flmo(inst.flmo)); break;
      }
      emit(rep, common);
      return 0;
    }
    if (bench->parsed()) {
      if (suite == "acceptance") {
        std::vector<CriterionResult> results;
        bool all = true;
        for (int id = 1; id <= kAcceptanceCriteria; ++id) {
          if (!criteria.empty() && std::find(criteria.begin(), criteria.end(), id) == criteria.end()) continue;
          results.push_back(run_criterion(id, bench_seed.value_or(kAcceptanceSeed)));
          std::cout << format_line(results.back()) << std::endl;
          all = all && results.back().passed;
        }
        if (!common.report.empty()) write_json_file(common.report, to_json(results));
        return all ? 0 : 1;
      }
      if (suite == "experiment") {
        spec.problem = parse_problem_kind(problem);
        if (spec.problem == ProblemKind::flmo && spec.family == "random_coverage") spec.family = "random_metric_flmo";
        spec.seed = bench_seed.value_or(1);
        const ExperimentReport rep = run_experiment(spec, solver_params(bench_o), trials);
        std::cout << to_table(rep);
        if (!common.report.empty()) write_json_file(common.report, to_json(rep));
        return rep.aggregate.errors == 0 && rep.aggregate.hard_failures == 0 ? 0 : 1;
      }
      throw std::invalid_argument("unknown suite '" + suite + "'");
    }
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "capacity: %s\n", e.what());
    return 3;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
