#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcover/generators.hpp"
#include "mcover/instance_io.hpp"
#include "mcover/msc_solver.hpp"
#include "mcover/rng.hpp"

namespace mcover {

// Which generator to draw from and at what size. Families: random_coverage (MSC or CCF),
// planted_optimum (MSC), vertex_cover_like (CCF), random_metric_flmo (FLMO).
struct ExperimentSpec {
  ProblemKind problem = ProblemKind::msc;
  std::string family = "random_coverage";
  CoverageParams coverage;
  std::size_t planted_size = 3;
  FlmoParams flmo;
  std::uint64_t seed = 1;
};

struct SolverParams {
  double eps = 0.25;         // ε for MSC and FLMO, ε* for CCF
  std::size_t alpha = 1;     // MSC rounds
  GuessConfig guess;
  std::string oracle = "threshold";  // CCF: threshold or generic
  std::size_t oracle_k = 2;          // threshold oracle frequency bound
};

Json to_json(const ExperimentSpec& spec);
Json to_json(const SolverParams& params);

// Throws std::invalid_argument when the family does not fit the problem kind.
LoadedInstance generate_instance(const ExperimentSpec& spec, RngStream& rng);

// Runs the solver selected by inst.kind and returns its report. `instance` is the JSON form
// of `inst`, used for the digest.
Json solve_report(const LoadedInstance& inst, const Json& instance, const SolverParams& params,
                  RngStream& rng);

// Brute-force optimum, or nullopt when the instance is infeasible.
std::optional<double> brute_force_opt(const LoadedInstance& inst);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t instance_seed = 0;
  std::uint64_t solver_seed = 0;
  bool ok = false;             // solver returned a report
  std::string error;
  bool hard_ok = false;        // every hard assert of the report passed
  double cost = 0.0;
  std::optional<double> opt;
  std::optional<double> ratio;  // cost / OPT; 1 when both are 0
  std::optional<Cost> planted_cost;
  std::vector<bool> rounding_miss;  // per constraint: the rounding left it unmet
  std::vector<bool> final_miss;     // per constraint: b_i not fully met at the end
  Json stage_costs;
  Json report;
};

struct ExperimentAggregate {
  std::size_t trials = 0;
  std::size_t solved = 0;
  std::size_t errors = 0;
  std::size_t hard_failures = 0;   // solved trials with a failed hard assert
  std::size_t planted_violations = 0;  // OPT above the planted cost
  std::size_t ratio_count = 0;
  double mean_ratio = 0.0;
  double sd_ratio = 0.0;
  double se_ratio = 0.0;           // sd / sqrt(count)
  double max_ratio = 0.0;
  double mean_cost = 0.0;
  std::vector<double> rounding_miss_rate;
  std::vector<double> final_miss_rate;
};

struct ExperimentReport {
  ExperimentSpec spec;
  SolverParams params;
  std::vector<TrialRecord> records;
  ExperimentAggregate aggregate;
};

// Trial t draws its instance from RngStream(spec.seed).split(t).split(0) and solves it with
// .split(t).split(1). Trials run in parallel; solver errors are recorded, never rethrown.
ExperimentReport run_experiment(const ExperimentSpec& spec, const SolverParams& params,
                                std::size_t trials, bool with_opt = true);

ExperimentAggregate aggregate(const std::vector<TrialRecord>& records);

// `with_reports` embeds every per-trial solve report.
Json to_json(const ExperimentReport& rep, bool with_reports = false);
std::string to_table(const ExperimentReport& rep);

}  // namespace mcover
