#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mcover/flmo_instance.hpp"
#include "mcover/instances.hpp"

namespace mcover {

// Costs rescaled by B / OPT onto integers, with everything above OPT pruned.
struct ScaledInstance {
  const FlmoInstance* base = nullptr;
  double opt_guess = 0.0;
  Cost B = 0;                                  // (|F| + |C|)^3
  std::vector<bool> facility_ok;               // f_i <= OPT
  std::vector<Cost> f_bar;
  std::vector<std::vector<bool>> pair_ok;      // [facility][client]: d(i,j) <= OPT
  std::vector<std::vector<Cost>> d_bar;        // [facility][client]
};

// ceil(v B / OPT), or 0 when v <= OPT / B. Throws std::invalid_argument unless opt_guess > 0.
ScaledInstance scale_and_prune(const FlmoInstance& inst, double opt_guess);

// The integer ceil(v B / OPT) used by scale_and_prune, tolerant of rounding noise.
Cost scale_cost(double v, double opt_guess, Cost B);

struct Star {
  Index facility = 0;
  std::vector<Index> clients;  // original client indices, ascending
  Cost cost = 0;               // residual scaled cost c̄'
};

// c̄(i,S) = f̄_i + Σ_{j ∈ S} d̄(i,j).
Cost full_star_cost(const ScaledInstance& s, Index facility, const std::vector<Index>& clients);

// A partial guess of one optimal star: facility, its L farthest clients, the full scaled cost.
struct GuessTuple {
  Index facility = 0;
  std::vector<Index> farthest;
  Cost full_cost = 0;
};

// Residual instance after guessing: demands drop by the guessed clients; guessed facilities
// only offer singleton stars no farther than their nearest guessed client, at cost d̄;
// other facilities offer stars of scaled cost at most G = min g_h.
struct ResidualStarSystem {
  const ScaledInstance* scaled = nullptr;
  std::vector<Index> clients;                 // C \ C_pre, ascending
  std::vector<double> requirements;           // b'_k
  std::vector<bool> guessed;                  // F_pre
  std::vector<std::vector<Index>> allowed;    // per facility, clients it may serve
  std::optional<Cost> G;                      // unset when nothing was guessed

  Cost star_cost(Index facility, const std::vector<Index>& clients) const;
};

ResidualStarSystem build_residual_system(const ScaledInstance& scaled,
                                         const std::vector<GuessTuple>& tuples);

struct PricedStar {
  std::vector<Index> items;  // indices into the item arrays
  double profit = 0.0;       // Σ (α_j - w_j)
  Cost weight = 0;
};

// Best-profit subset with Σ w_j <= capacity, by DP over integer weights. Profits are
// α_j - w_j; items with nonpositive profit are never taken. Ties keep the lighter subset.
PricedStar knapsack_best_star(const std::vector<double>& alpha, const std::vector<Cost>& weight,
                              Cost capacity);
// Same answer by enumerating every subset (at most 20 items).
PricedStar knapsack_best_star_brute(const std::vector<double>& alpha,
                                    const std::vector<Cost>& weight, Cost capacity);

// The star at `facility` with the largest Σ α_j - c̄'(i,S), returned when that quantity is
// >= 0 (a star whose dual constraint is tight or violated). `alpha` is indexed by client.
struct StarViolation {
  Star star;
  double violation = 0.0;  // Σ α_j - c̄'(i,S)
};
std::optional<StarViolation> price_star(const ResidualStarSystem& sys, Index facility,
                                        const std::vector<double>& alpha);

// Same maximum by enumerating every admissible star (at most 20 allowed clients).
std::optional<StarViolation> price_star_exhaustive(const ResidualStarSystem& sys, Index facility,
                                                   const std::vector<double>& alpha);

// price_star for every facility, in parallel or serially; identical results.
std::vector<std::optional<StarViolation>> price_all(const ResidualStarSystem& sys,
                                                    const std::vector<double>& alpha);
std::vector<std::optional<StarViolation>> price_all_serial(const ResidualStarSystem& sys,
                                                           const std::vector<double>& alpha);

}  // namespace mcover
