#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/fractional.hpp"
#include "mcover/instances.hpp"
#include "mcover/rng.hpp"
#include "mcover/submodular.hpp"

namespace mcover {

enum class GuessMode { exact_enumeration, oracle_assisted, heuristic_topcost };

const char* to_string(GuessMode mode);
// Throws std::invalid_argument for unknown names.
GuessMode parse_guess_mode(const std::string& name);

struct GuessConfig {
  GuessMode mode = GuessMode::oracle_assisted;
  // Number of elements (or sets, or stars) to guess; the theoretical count when unset.
  std::optional<std::size_t> L_override;
  // exact_enumeration refuses to run when it would try more guesses than this.
  std::size_t max_guesses = 4096;
};

// Candidate S_pre sets in the order they are tried: the top-L costliest elements of a
// brute-forced optimum, {top-L globally, ∅}, or every subset of at most L elements.
// exact_enumeration throws CapacityError above cfg.max_guesses.
std::vector<ElementSet> build_guesses(const MscInstance& inst, std::size_t L,
                                      const GuessConfig& cfg);

// r * ceil((1/ε'') (1/ℓ) ln(1/ε'')) with ℓ = lipschitz_ell(r, ε'').
std::size_t theoretical_L(std::size_t r, double eps2);

// Partial enumeration: every seed of at most 3 affordable elements, completed greedily by
// marginal gain per unit cost among the elements that still fit. Returns the best completion.
ElementSet sviridenko_knapsack_max(const SubmodularOracle& f, const CostFunction& costs,
                                   Cost budget);
ElementSet sviridenko_knapsack_max_serial(const SubmodularOracle& f, const CostFunction& costs,
                                          Cost budget);

struct GreedyFixResult {
  ElementSet set;
  double value = 0.0;
  bool ok = false;  // value >= (1 - 1/e) b'_i
};

// Knapsack-constrained maximization of constraint i of a residual instance at `budget`.
GreedyFixResult greedy_fix_msc(const MscInstance& residual, std::size_t i, Cost budget);

// One guess of one round of the single-round algorithm. Sets are in root indices.
struct MscRoundReport {
  std::size_t guess_index = 0;
  bool feasible = false;
  std::string outcome;  // "pre_only", "full", "empty", or the reason the guess failed
  ElementSet s_pre;
  Cost opt_guess = 0;   // C*, the smallest budget at which the relaxation succeeded
  std::size_t relax_calls = 0;
  bool relax_exact = true;
  double relax_cost = 0.0;
  std::vector<double> relax_bounds;
  double ell = 0.0;
  Cost greedy_cost = 0;
  Cost sampled_cost = 0;
  bool precondition_holds = true;
  ElementSet r_set;
  std::vector<std::size_t> fixed_constraints;
  std::vector<Cost> fix_budgets;
  ElementSet t_set;
  ElementSet final_set;
  Cost cost_pre = 0, cost_r = 0, cost_t = 0, cost_total = 0;
};

struct MscSolveReport {
  std::string guess_mode;
  std::size_t L = 0;
  std::size_t alpha = 1;
  double eps = 0.0, eps1 = 0.0, eps2 = 0.0;
  std::uint64_t seed = 0;
  std::size_t guesses_tried = 0;
  std::vector<MscRoundReport> rounds;  // the chosen guess of every round
  ElementSet final_set;                // root indices
  Cost cost = 0;
  std::vector<double> values;          // f_i(final_set) on the input instance
  std::vector<double> requirements;
  std::vector<double> ratios;          // min(f_i, b_i)/b_i, 1 when b_i = 0
  double coverage_target = 0.0;        // (1 - 1/e - ε) or (1 - e^-α - ε)
  bool coverage_ok = false;            // hard
};

// Stages 1-4 on `inst`. Throws SolverError when every guess fails.
MscSolveReport solve_msc_single(const MscInstance& inst, double eps, const GuessConfig& cfg,
                                RngStream& rng);

// α rounds; round t runs the single-round algorithm with min(1 - 2/e, ε) on the normalized
// residual of `inst` with respect to everything chosen so far.
MscSolveReport solve_msc_multi(const MscInstance& inst, std::size_t alpha, double eps,
                               const GuessConfig& cfg, RngStream& rng);

}  // namespace mcover
