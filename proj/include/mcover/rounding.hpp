#pragma once

#include <cstddef>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/extension.hpp"
#include "mcover/instances.hpp"
#include "mcover/rng.hpp"
#include "mcover/submodular.hpp"

namespace mcover {

// ε² / (2 ln(r/ε)). Throws std::domain_error unless r >= 1, 0 < ε < 1 and r/ε > 1.
double lipschitz_ell(std::size_t r, double eps);

// ceil((1/ℓ) ln(1/ε)): the most elements lipschitz_greedy can pick.
std::size_t greedy_size_bound(double ell, double eps);

enum class GreedyStop { coverage_met, marginals_small };

const char* to_string(GreedyStop stop);

struct LipschitzGreedyResult {
  ElementSet selected;
  GreedyStop stop = GreedyStop::coverage_met;
  std::size_t iterations = 0;
  std::vector<double> trace;  // f(S^(t)) for t = 0..iterations
};

// Adds the element of largest marginal while some marginal is >= ℓ(b - f(S)) and
// f(S) < (1-ε)b. Ties go to the lowest index. The second form only considers `candidates`.
LipschitzGreedyResult lipschitz_greedy(const SubmodularOracle& f, double b, double eps,
                                       double ell);
LipschitzGreedyResult lipschitz_greedy(const SubmodularOracle& f, double b, double eps,
                                       double ell, const ElementSet& candidates);

struct RoundingOptions {
  // Restricts the per-constraint greedy to these elements when set.
  const ElementSet* greedy_candidates = nullptr;
  bool check_precondition = true;
  // Used for the precondition check when the ground is too large for exact enumeration.
  double estimate_rel_tol = 0.02;
  double estimate_delta = 0.01;
};

struct RoundingOutcome {
  double ell = 0.0;
  std::vector<LipschitzGreedyResult> greedy;  // one per constraint
  ElementSet preselected;                     // union of the greedy sets
  ElementSet sampled;                         // S' ~ x
  ElementSet final_set;                       // preselected ∪ sampled
  std::vector<double> values;                 // f_i(final_set)
  std::vector<bool> met;                      // f_i(final_set) >= (1-ε) b_i
  Cost greedy_cost = 0;
  Cost sampled_cost = 0;
  Cost total_cost = 0;

  // F_i(x) >= b_i, checked exactly when n <= 20 and by sampling otherwise.
  bool precondition_checked = false;
  bool precondition_exact = false;
  bool precondition_holds = false;
  std::vector<double> precondition_values;
};

// Greedy pre-selection per constraint with ℓ = lipschitz_ell(r, ε), plus one independent
// rounding of x. The requirements of `inst` are the targets the rounding aims at.
RoundingOutcome round_fractional(const MscInstance& inst, const FractionalPoint& x, double eps,
                                 RngStream& rng, const RoundingOptions& options = {});

}  // namespace mcover
