#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/flmo_instance.hpp"
#include "mcover/instances.hpp"

namespace mcover {

inline constexpr std::size_t kMaxBruteForceMsc = 22;

struct BruteForceResult {
  bool feasible = false;
  Cost cost = 0;
  ElementSet set;  // ties go to the lexicographically smallest index list
};

// Exhaustive minimum-cost feasible subset. Throws CapacityError above 22 elements.
BruteForceResult brute_force_msc(const MscInstance& inst);
BruteForceResult brute_force_msc_serial(const MscInstance& inst);

// Same search over set collections; `set` holds set indices.
BruteForceResult brute_force_ccf(const CcfInstance& inst);

// max f(T) s.t. c(T) <= budget, by enumeration. Returns the value.
double brute_force_knapsack_max(const SubmodularOracle& f, const CostFunction& costs, Cost budget);

inline constexpr std::size_t kMaxBruteForceFacilities = 6;
inline constexpr std::size_t kMaxBruteForceClients = 12;

struct FlmoBruteForceResult {
  bool feasible = false;
  double cost = 0.0;
  FlmoSolution solution;
};

// Every facility subset, then the cheapest set of clients meeting all demands when each
// client uses its nearest open facility. Throws CapacityError above 6 facilities or
// 12 clients. Ties keep the first subset in (facility mask, client mask) order.
FlmoBruteForceResult brute_force_flmo(const FlmoInstance& inst);

}  // namespace mcover
