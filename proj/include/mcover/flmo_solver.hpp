#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/flmo_instance.hpp"
#include "mcover/flmo_pricing.hpp"
#include "mcover/lp_simplex.hpp"
#include "mcover/msc_solver.hpp"
#include "mcover/rng.hpp"

namespace mcover {

// Primal LP over a list of star columns plus z_j for every residual client.
struct StarLpResult {
  LpStatus status = LpStatus::solver_failure;
  std::vector<Star> columns;
  std::vector<double> x;        // one per column
  std::vector<double> z;        // indexed by client; 0 outside the residual
  std::vector<double> alpha;    // cover-row duals, indexed by client
  double objective = 0.0;       // scaled units
  std::size_t rounds = 0;       // column-generation rounds (1 for an explicit LP)
  bool converged = true;        // pricing found no star violating by more than 1e-9
};

// Column generation from the allowed singleton stars: solve, price every facility, add each
// star whose dual constraint is violated by more than 1e-9, repeat until none is.
StarLpResult solve_restricted_lp(const ResidualStarSystem& sys, std::size_t max_rounds = 1000);

// The same LP with every allowed star materialized. Throws CapacityError when some facility
// may serve more than 16 residual clients.
StarLpResult solve_full_star_lp(const ResidualStarSystem& sys);

// Fractional facility-location point: y per facility, x[i][h] per facility and listed client.
struct UcflPoint {
  std::vector<double> y;
  std::vector<std::vector<double>> x;
};

struct UcflResult {
  ElementSet open;
  std::vector<Index> assignment;  // facility per listed client
  double cost = 0.0;              // opening (per `opening`) plus original distances
  double fractional_cost = 0.0;
  double beta = 4.0;
  bool within_bound = true;       // cost <= beta * fractional_cost
};

// Optimal LP-FL point for connecting every listed client, for checking the rounding.
UcflPoint solve_ucfl_lp(const FlmoInstance& inst, const std::vector<Index>& clients,
                        const std::vector<double>& opening, double* objective = nullptr);

// Filtering: each client keeps the facilities within (4/3) of its fractional connection
// cost, clients are clustered in increasing radius, and each cluster opens the cheapest
// facility of its center's ball. Connects every listed client at cost <= 4 x the fractional
// cost. Throws std::invalid_argument if some client is fractionally connected below 1.
UcflResult cover_heavy_ucfl(const FlmoInstance& inst, const std::vector<Index>& clients,
                            const std::vector<double>& opening, const UcflPoint& point);

// A guessed optimal star before scaling: the facility, the clients guessed for it and the
// full client set whose scaled cost becomes g_h.
struct TupleSpec {
  Index facility = 0;
  std::vector<Index> farthest;
  std::vector<Index> full_star;
};

// The T costliest stars of `sol` (scaled at `opt_guess`, ties to the lower facility index),
// each with its L farthest clients (ties to the lower client index).
std::vector<TupleSpec> tuples_from_solution(const FlmoInstance& inst, const FlmoSolution& sol,
                                            double opt_guess, std::size_t T, std::size_t L);

struct FlmoGuessReport {
  std::size_t guess_index = 0;
  bool feasible = false;
  std::string outcome;  // "pre_only", "empty", "full", or why the guess failed
  double opt_guess = 0.0;
  Cost B = 0;
  std::vector<GuessTuple> tuples;
  std::optional<Cost> G;
  std::size_t residual_clients = 0;
  std::vector<double> residual_requirements;
  std::size_t columns = 0;
  std::size_t cg_rounds = 0;
  bool cg_converged = true;
  double lp_objective = 0.0;           // scaled units
  std::vector<Index> heavy;
  std::size_t shallow_count = 0;
  UcflResult ucfl;
  std::size_t support_size = 0;
  std::vector<Star> rounded_stars;
  std::vector<bool> rounding_met;      // per color, after rounding the shallow part
  bool precondition_checked = false;
  bool precondition_holds = true;
  std::vector<std::size_t> fixed_colors;
  std::vector<Star> fix_stars;
  FlmoSolution solution;
  double cost = 0.0;
};

struct FlmoSolveReport {
  std::string guess_mode;
  std::size_t L = 0;
  std::size_t T = 0;
  double eps = 0.0;
  double beta_fl = 4.0;
  std::uint64_t seed = 0;
  std::vector<double> opt_guesses;
  std::size_t guesses_tried = 0;
  FlmoGuessReport chosen;
  FlmoSolution solution;
  double cost = 0.0;
  std::vector<std::size_t> served;
  std::vector<std::size_t> requirements;
  bool feasible = false;  // hard
};

// Scale at each OPT guess, guess tuples, generate columns, cover heavy clients, round the
// shallow part over the support stars, greedily fix unmet colors. oracle_assisted uses the
// brute-forced optimum for both OPT and the tuples; the other modes search OPT over a
// geometric (1+ε) grid below the open-everything cost. Throws SolverError when every guess
// fails.
FlmoSolveReport solve_flmo(const FlmoInstance& inst, double eps, const GuessConfig& cfg,
                           RngStream& rng);

}  // namespace mcover
