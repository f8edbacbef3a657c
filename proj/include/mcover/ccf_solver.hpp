#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/instances.hpp"
#include "mcover/msc_solver.hpp"
#include "mcover/rng.hpp"

namespace mcover {

// r ceil((1/ℓ) ln(1/ε)) + r with ℓ = lipschitz_ell(r, ε).
std::size_t ccf_guess_count(std::size_t r, double eps);

// (1 - 1/e)(1 - ε): points whose LP coverage reaches it are heavy.
double heavy_threshold(double eps);

struct HeavySplit {
  std::vector<Index> heavy;
  std::vector<Index> shallow;
};

// Partitions point indices by z_j >= heavy_threshold(eps). Throws std::invalid_argument
// when some z_j lies outside [0,1].
HeavySplit heavy_shallow_split(const std::vector<double>& z, double eps);

// LP-based full-coverage algorithm for a deletion-closed set family. `x` holds one value
// per set with Σ_{i ∋ j} x_i >= 1 for every presented point j.
class FullCoverOracle {
 public:
  virtual ~FullCoverOracle() = default;
  virtual std::string name() const = 0;
  virtual double beta(const CcfInstance& presented) const = 0;
  // False when the cost bound only holds in expectation.
  virtual bool worst_case_beta() const = 0;
  virtual ElementSet cover(const CcfInstance& presented, const std::vector<double>& x,
                           RngStream& rng) const = 0;
};

// Picks every set with x_i >= 1/k. Valid when every point lies in at most k sets, which is
// checked on each call (std::invalid_argument otherwise). β = k.
class ThresholdOracle final : public FullCoverOracle {
 public:
  explicit ThresholdOracle(std::size_t k);
  std::string name() const override { return "threshold"; }
  double beta(const CcfInstance&) const override { return static_cast<double>(k_); }
  bool worst_case_beta() const override { return true; }
  ElementSet cover(const CcfInstance& presented, const std::vector<double>& x,
                   RngStream& rng) const override;

 private:
  std::size_t k_;
};

// Independent rounding of x repeated ceil(2 ln(n+1)) times, redrawn until every point is
// covered. After 64 failed draws each uncovered point takes its largest-x set.
// β = ceil(2 ln(n+1)) in expectation.
class GenericOracle final : public FullCoverOracle {
 public:
  std::string name() const override { return "generic"; }
  double beta(const CcfInstance& presented) const override;
  bool worst_case_beta() const override { return false; }
  ElementSet cover(const CcfInstance& presented, const std::vector<double>& x,
                   RngStream& rng) const override;
};

struct HeavyCover {
  ElementSet sets;
  Cost cost = 0;
  double fractional_cost = 0.0;  // Σ c_i x_i of the presented point
  double beta = 0.0;
  bool within_bound = true;      // cost <= β · fractional_cost
};

// Runs the oracle on `presented` (a universe of heavy points). Throws std::invalid_argument
// if x does not fractionally cover every point, and SolverError if the oracle misses a point
// or a worst-case oracle exceeds its β bound.
HeavyCover cover_heavy(const CcfInstance& presented, const std::vector<double>& x,
                       const FullCoverOracle& oracle, RngStream& rng);

struct MbcGreedyResult {
  ElementSet sets;
  double weight = 0.0;  // newly covered weight in row i
  Cost cost = 0;
  bool satisfied = false;
};

// Adds the set of largest marginal weight (row i) per unit cost, ties to the lowest index,
// until row i meets its requirement. With a budget it also stops as soon as the cost
// reaches or exceeds it. `satisfied` is false when positive-gain sets run out first.
MbcGreedyResult mbc_greedy_fix(const CcfInstance& residual, std::size_t i,
                               std::optional<Cost> budget = std::nullopt);

struct CcfFix {
  std::size_t constraint = 0;
  ElementSet sets;
  Cost cost = 0;
};

// One guess. Set indices refer to the input instance, point indices to its points.
struct CcfGuessReport {
  std::size_t guess_index = 0;
  bool feasible = false;
  std::string outcome;  // "pre_only", "empty", "full", or why the guess failed
  ElementSet s_pre;
  std::size_t pruned_sets = 0;
  double lp_objective = 0.0;
  std::vector<Index> heavy;
  std::size_t shallow_count = 0;
  HeavyCover heavy_cover;
  ElementSet s_he;
  ElementSet s_sh;
  bool precondition_checked = false;
  bool precondition_holds = true;
  std::vector<CcfFix> fixes;
  ElementSet final_set;
  Cost cost_pre = 0, cost_he = 0, cost_sh = 0, cost_fix = 0, cost_total = 0;
};

struct CcfSolveReport {
  std::string guess_mode;
  std::string oracle;
  std::size_t L = 0;
  double eps_star = 0.0;
  double eps = 0.0;            // internal ε with (ε/(1-ε)) e/(e-1) = ε*
  double tau = 0.0;            // heavy threshold
  double scale = 0.0;          // (e/(e-1)) / (1-ε)
  double beta = 0.0;
  bool beta_worst_case = true;
  std::uint64_t seed = 0;
  std::size_t guesses_tried = 0;
  CcfGuessReport chosen;
  ElementSet final_set;
  Cost cost = 0;
  std::vector<double> coverage;
  std::vector<double> requirements;
  bool feasible = false;       // hard: A z >= b
};

// ε = k/(1+k) with k = ε*(e-1)/e.
double ccf_internal_eps(double eps_star);

// Guess, prune, LP, heavy cover, scaled rounding of the shallow part, greedy fix.
// Throws SolverError when every guess fails.
CcfSolveReport solve_ccf(const CcfInstance& inst, double eps_star, const FullCoverOracle& oracle,
                         const GuessConfig& cfg, RngStream& rng);

}  // namespace mcover
