#include "mcover/brute_force.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "mcover/errors.hpp"
#include "mcover/parallel.hpp"

namespace mcover {

namespace {

void check_size(std::size_t n, const char* what) {
  if (n > kMaxBruteForceMsc) {
    throw CapacityError(std::string(what) + ": " + std::to_string(n) +
                        " elements exceed the enumeration bound " +
                        std::to_string(kMaxBruteForceMsc));
  }
}

struct MaskCosts {
  std::size_t lo;
  std::vector<Cost> low, high;

  explicit MaskCosts(const CostFunction& c) {
    const std::size_t n = c.size();
    lo = n / 2;
    low = build(c, 0, lo);
    high = build(c, lo, n);
  }
  Cost operator()(std::uint64_t mask) const {
    return low[mask & ((1ULL << lo) - 1)] + high[mask >> lo];
  }
  static std::vector<Cost> build(const CostFunction& c, std::size_t from, std::size_t to) {
    std::vector<Cost> t{0};
    for (std::size_t e = from; e < to; ++e) {
      const std::size_t half = t.size();
      t.resize(2 * half);
      for (std::size_t m = 0; m < half; ++m) t[m + half] = t[m] + c[e];
    }
    return t;
  }
};

// Lexicographic order of sorted index lists, on bitmasks.
bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
  while (a != 0 && b != 0) {
    const int ia = __builtin_ctzll(a);
    const int ib = __builtin_ctzll(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

struct Best {
  bool found = false;
  Cost cost = 0;
  std::uint64_t mask = 0;

  void offer(Cost c, std::uint64_t m) {
    if (!found || c < cost || (c == cost && mask_lex_less(m, mask))) {
      found = true;
      cost = c;
      mask = m;
    }
  }
};

bool feasible_mask(const MscInstance& inst, ElementSet& s, std::uint64_t mask) {
  s.assign_mask(mask);
  for (const auto& c : inst.constraints) {
    if (c.f->value(s) < c.requirement - kCoverTol) return false;
  }
  return true;
}

BruteForceResult finish(const MscInstance& inst, const Best& best) {
  BruteForceResult res;
  res.feasible = best.found;
  res.set = ElementSet(inst.n);
  if (best.found) {
    res.cost = best.cost;
    res.set = ElementSet::from_mask(inst.n, best.mask);
  }
  return res;
}

}  // namespace

BruteForceResult brute_force_msc_serial(const MscInstance& inst) {
  check_size(inst.n, "brute_force_msc");
  const MaskCosts cost(inst.costs);
  Best best;
  ElementSet s(inst.n);
  for (std::uint64_t mask = 0; mask < (1ULL << inst.n); ++mask) {
    const Cost c = cost(mask);
    if (best.found && c > best.cost) continue;
    if (feasible_mask(inst, s, mask)) best.offer(c, mask);
  }
  return finish(inst, best);
}

BruteForceResult brute_force_msc(const MscInstance& inst) {
  check_size(inst.n, "brute_force_msc");
  const MaskCosts cost(inst.costs);
  const std::uint64_t total = 1ULL << inst.n;
  const std::uint64_t chunks = std::min<std::uint64_t>(kReductionChunks, total);
  const std::uint64_t per_chunk = total / chunks;
  std::vector<Best> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
    Best local;
    ElementSet s(inst.n);
    const std::uint64_t begin = static_cast<std::uint64_t>(ci) * per_chunk;
    for (std::uint64_t mask = begin; mask < begin + per_chunk; ++mask) {
      const Cost c = cost(mask);
      if (local.found && c > local.cost) continue;
      if (feasible_mask(inst, s, mask)) local.offer(c, mask);
    }
    partial[static_cast<std::size_t>(ci)] = local;
  }
  Best best;
  for (const auto& p : partial) {
    if (p.found) best.offer(p.cost, p.mask);
  }
  return finish(inst, best);
}

BruteForceResult brute_force_ccf(const CcfInstance& inst) {
  return brute_force_msc(ccf_as_msc(inst));
}

double brute_force_knapsack_max(const SubmodularOracle& f, const CostFunction& costs, Cost budget) {
  const std::size_t n = f.ground_size();
  check_size(n, "brute_force_knapsack_max");
  const MaskCosts cost(costs);
  double best = 0.0;
  ElementSet s(n);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    if (cost(mask) > budget) continue;
    s.assign_mask(mask);
    best = std::max(best, f.value(s));
  }
  return best;
}

FlmoBruteForceResult brute_force_flmo(const FlmoInstance& inst) {
  const std::size_t F = inst.num_facilities, C = inst.num_clients, r = inst.r();
  if (F > kMaxBruteForceFacilities || C > kMaxBruteForceClients) {
    throw CapacityError("brute_force_flmo: at most " + std::to_string(kMaxBruteForceFacilities) +
                        " facilities and " + std::to_string(kMaxBruteForceClients) + " clients");
  }
  std::vector<std::uint64_t> color_masks(r, 0);
  for (std::size_t k = 0; k < r; ++k) {
    for (Index j : inst.colors[k]) color_masks[k] |= 1ULL << j;
  }
  std::vector<std::uint64_t> feasible_clients;
  for (std::uint64_t cm = 0; cm < (1ULL << C); ++cm) {
    bool ok = true;
    for (std::size_t k = 0; k < r && ok; ++k) {
      ok = static_cast<std::size_t>(std::popcount(cm & color_masks[k])) >= inst.requirements[k];
    }
    if (ok) feasible_clients.push_back(cm);
  }

  FlmoBruteForceResult out;
  std::uint64_t best_f = 0, best_c = 0;
  std::vector<double> near(C);
  std::vector<Index> near_at(C);
  for (std::uint64_t fm = 0; fm < (1ULL << F); ++fm) {
    double open_cost = 0.0;
    for (Index i = 0; i < F; ++i) {
      if ((fm >> i) & 1ULL) open_cost += inst.opening[i];
    }
    for (Index j = 0; j < C; ++j) {
      near[j] = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < F; ++i) {
        if (((fm >> i) & 1ULL) && inst.d(i, j) < near[j]) {
          near[j] = inst.d(i, j);
          near_at[j] = i;
        }
      }
    }
    for (std::uint64_t cm : feasible_clients) {
      double cost = open_cost;
      for (Index j = 0; j < C && std::isfinite(cost); ++j) {
        if ((cm >> j) & 1ULL) cost += near[j];
      }
      if (!std::isfinite(cost)) continue;
      if (!out.feasible || cost < out.cost - 1e-12 * std::max(1.0, out.cost)) {
        out.feasible = true;
        out.cost = cost;
        best_f = fm;
        best_c = cm;
      }
    }
  }
  if (!out.feasible) return out;
  out.solution.open = ElementSet::from_mask(F, best_f);
  out.solution.assignment.assign(C, std::nullopt);
  for (Index j = 0; j < C; ++j) {
    if (!((best_c >> j) & 1ULL)) continue;
    Index at = F;
    for (Index i = 0; i < F; ++i) {
      if (((best_f >> i) & 1ULL) && (at == F || inst.d(i, j) < inst.d(at, j))) at = i;
    }
    out.solution.assignment[j] = at;
  }
  return out;
}

}  // namespace mcover
