#include "mcover/msc_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "mcover/brute_force.hpp"
#include "mcover/errors.hpp"
#include "mcover/rounding.hpp"

namespace mcover {

namespace {
const double kOneMinusInvE = 1.0 - 1.0 / std::exp(1.0);
}  // namespace

const char* to_string(GuessMode mode) {
  switch (mode) {
    case GuessMode::exact_enumeration: return "exact_enumeration";
    case GuessMode::oracle_assisted: return "oracle_assisted";
    case GuessMode::heuristic_topcost: return "heuristic_topcost";
  }
  return "unknown";
}

GuessMode parse_guess_mode(const std::string& name) {
  if (name == "exact_enumeration" || name == "exact") return GuessMode::exact_enumeration;
  if (name == "oracle_assisted" || name == "oracle") return GuessMode::oracle_assisted;
  if (name == "heuristic_topcost" || name == "heuristic") return GuessMode::heuristic_topcost;
  throw std::invalid_argument("unknown guess mode '" + name + "'");
}

std::size_t theoretical_L(std::size_t r, double eps2) {
  const double ell = lipschitz_ell(r, eps2);
  const double per = std::ceil((1.0 / eps2) * (1.0 / ell) * std::log(1.0 / eps2));
  return r * static_cast<std::size_t>(per);
}

namespace {

// True when gain_a / cost_a beats gain_b / cost_b; zero cost counts as an infinite ratio.
bool better_ratio(double gain_a, Cost cost_a, double gain_b, Cost cost_b) {
  if (cost_a == 0 || cost_b == 0) {
    if (cost_a == 0 && cost_b == 0) return gain_a > gain_b;
    return cost_a == 0;
  }
  return gain_a * static_cast<double>(cost_b) > gain_b * static_cast<double>(cost_a);
}

struct Completion {
  double value = -1.0;
  ElementSet set;
};

Completion complete_greedily(const SubmodularOracle& f, const CostFunction& costs, Cost budget,
                             ElementSet s) {
  const std::size_t n = f.ground_size();
  Cost spent = costs.total(s);
  double value = f.value(s);
  for (;;) {
    Index best = n;
    double best_gain = 0.0;
    for (Index e = 0; e < n; ++e) {
      if (s.contains(e) || spent + costs[e] > budget) continue;
      s.insert(e);
      const double gain = f.value(s) - value;
      s.erase(e);
      if (gain <= 1e-15) continue;
      if (best == n || better_ratio(gain, costs[e], best_gain, costs[best])) {
        best = e;
        best_gain = gain;
      }
    }
    if (best == n) break;
    s.insert(best);
    spent += costs[best];
    value = f.value(s);
  }
  return {value, std::move(s)};
}

std::vector<ElementSet> knapsack_seeds(const CostFunction& costs, Cost budget) {
  const std::size_t n = costs.size();
  std::vector<ElementSet> seeds{ElementSet(n)};
  for (Index a = 0; a < n; ++a) {
    if (costs[a] > budget) continue;
    seeds.push_back(ElementSet(n, {a}));
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      if (costs[a] + costs[b] > budget) continue;
      seeds.push_back(ElementSet(n, {a, b}));
    }
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      for (Index c = b + 1; c < n; ++c) {
        if (costs[a] + costs[b] + costs[c] > budget) continue;
        seeds.push_back(ElementSet(n, {a, b, c}));
      }
    }
  }
  return seeds;
}

void check_knapsack_args(const SubmodularOracle& f, const CostFunction& costs, Cost budget) {
  if (costs.size() != f.ground_size()) throw std::domain_error("knapsack: cost vector size");
  if (budget < 0) throw std::invalid_argument("knapsack: budget must be >= 0");
}

}  // namespace

ElementSet sviridenko_knapsack_max_serial(const SubmodularOracle& f, const CostFunction& costs,
                                          Cost budget) {
  check_knapsack_args(f, costs, budget);
  Completion best;
  for (const auto& seed : knapsack_seeds(costs, budget)) {
    Completion c = complete_greedily(f, costs, budget, seed);
    if (c.value > best.value) best = std::move(c);
  }
  return best.set;
}

ElementSet sviridenko_knapsack_max(const SubmodularOracle& f, const CostFunction& costs,
                                   Cost budget) {
  check_knapsack_args(f, costs, budget);
  const std::vector<ElementSet> seeds = knapsack_seeds(costs, budget);
  std::vector<Completion> done(seeds.size());
#pragma omp parallel for schedule(dynamic, 4) if (seeds.size() > 16)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(seeds.size()); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    done[idx] = complete_greedily(f, costs, budget, seeds[idx]);
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < done.size(); ++k) {
    if (done[k].value > done[best].value) best = k;
  }
  return done[best].set;
}

GreedyFixResult greedy_fix_msc(const MscInstance& residual, std::size_t i, Cost budget) {
  if (i >= residual.r()) throw std::out_of_range("greedy_fix_msc: constraint index");
  const auto& c = residual.constraints[i];
  GreedyFixResult res;
  res.set = ElementSet(residual.n);
  if (c.requirement <= kCoverTol) {
    res.ok = true;
    return res;
  }
  res.set = sviridenko_knapsack_max(*c.f, residual.costs, budget);
  res.value = eval(*c.f, res.set);
  res.ok = res.value >= kOneMinusInvE * c.requirement - kCoverTol;
  return res;
}

namespace {

// Maps a set over `child` (derived from `parent` by residual constructions) to parent indices.
ElementSet to_parent(const MscInstance& parent, const MscInstance& child, const ElementSet& s) {
  std::unordered_map<Index, Index> local;
  for (Index e = 0; e < parent.n; ++e) local.emplace(parent.origin[e], e);
  ElementSet out(parent.n);
  s.for_each([&](Index e) { out.insert(local.at(child.origin[e])); });
  return out;
}

bool all_zero(const MscInstance& inst) {
  return std::all_of(inst.constraints.begin(), inst.constraints.end(),
                     [](const Constraint& c) { return c.requirement <= kCoverTol; });
}

struct GuessOutcome {
  MscRoundReport report;
  ElementSet local_final;  // over the round instance
};

GuessOutcome run_guess(const MscInstance& norm, const ElementSet& pre, std::size_t index,
                       double eps, RngStream rng) {
  const double eps1 = eps / 4.0;
  const double eps2 = eps / 4.0;
  GuessOutcome out;
  MscRoundReport& rep = out.report;
  rep.guess_index = index;
  rep.s_pre = norm.lift(pre);
  rep.cost_pre = norm.cost(pre);
  rep.r_set = ElementSet(norm.root_size);
  rep.t_set = ElementSet(norm.root_size);
  out.local_final = pre;

  if (norm.satisfies(pre)) {
    rep.feasible = true;
    rep.outcome = pre.empty() ? "empty" : "pre_only";
    rep.final_set = rep.s_pre;
    rep.cost_total = rep.cost_pre;
    return out;
  }

  const MscInstance res = residual_msc(norm, pre, true);
  MscInstance resn;
  try {
    resn = normalized(res);
  } catch (const std::invalid_argument&) {
    rep.outcome = "cost-truncated residual cannot meet its requirements";
    return out;
  }
  const Cost full = res.costs.total();

  const RngStream relax_base = rng.split(1);
  MscRelaxResult best_relax;
  auto relax_ok = [&](Cost budget) {
    RngStream r = relax_base.split(static_cast<std::uint64_t>(budget));
    MscRelaxResult rr = solve_msc_relax(resn, static_cast<double>(budget), eps1, r);
    ++rep.relax_calls;
    const bool ok = rr.status == RelaxStatus::feasible_point;
    if (ok) best_relax = std::move(rr);
    return ok;
  };
  if (!relax_ok(full)) {
    rep.outcome = "relaxation infeasible at the full residual budget";
    return out;
  }
  Cost lo = 0, hi = full;
  MscRelaxResult at_hi = best_relax;
  while (lo < hi) {
    const Cost mid = lo + (hi - lo) / 2;
    if (relax_ok(mid)) {
      hi = mid;
      at_hi = best_relax;
    } else {
      lo = mid + 1;
    }
  }
  rep.opt_guess = hi;
  rep.relax_exact = at_hi.exact;
  rep.relax_cost = at_hi.cost;
  rep.relax_bounds = at_hi.bounds;

  std::vector<double> targets;
  for (const auto& c : resn.constraints) targets.push_back((kOneMinusInvE - eps1) * c.requirement);
  const MscInstance round_inst = with_requirements(resn, targets);
  RngStream round_rng = rng.split(2);
  const RoundingOutcome ro = round_fractional(round_inst, at_hi.x, eps2, round_rng);
  rep.ell = ro.ell;
  rep.greedy_cost = ro.greedy_cost;
  rep.sampled_cost = ro.sampled_cost;
  rep.precondition_holds = ro.precondition_holds;
  const ElementSet& r_local = ro.final_set;

  ElementSet t_local(resn.n);
  for (std::size_t i = 0; i < resn.r(); ++i) {
    const auto& c = resn.constraints[i];
    if (eval(*c.f, r_local) >= (kOneMinusInvE - eps) * c.requirement - kCoverTol) continue;
    GreedyFixResult fix = greedy_fix_msc(resn, i, rep.opt_guess);
    Cost used = rep.opt_guess;
    if (!fix.ok) {
      // The guessed OPT' was too small for the knapsack step; advance it.
      GreedyFixResult top = greedy_fix_msc(resn, i, full);
      if (!top.ok) {
        rep.outcome = "greedy fix cannot reach (1 - 1/e) of a residual requirement";
        return out;
      }
      Cost flo = rep.opt_guess + 1, fhi = full;
      while (flo < fhi) {
        const Cost mid = flo + (fhi - flo) / 2;
        GreedyFixResult g = greedy_fix_msc(resn, i, mid);
        if (g.ok) {
          fhi = mid;
          top = std::move(g);
        } else {
          flo = mid + 1;
        }
      }
      fix = std::move(top);
      used = fhi;
    }
    rep.fixed_constraints.push_back(i);
    rep.fix_budgets.push_back(used);
    t_local.unite(fix.set);
  }

  rep.feasible = true;
  rep.outcome = "full";
  rep.r_set = resn.lift(r_local);
  rep.t_set = resn.lift(t_local);
  rep.cost_r = resn.cost(r_local);
  rep.cost_t = resn.cost(t_local);
  out.local_final = set_union(pre, to_parent(norm, resn, set_union(r_local, t_local)));
  rep.final_set = norm.lift(out.local_final);
  rep.cost_total = norm.cost(out.local_final);
  return out;
}

}  // namespace

std::vector<ElementSet> build_guesses(const MscInstance& norm, std::size_t L,
                                      const GuessConfig& cfg) {
  const std::size_t n = norm.n;
  auto by_cost_desc = [&](std::vector<Index> idx) {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Index a, Index b) { return norm.costs[a] > norm.costs[b]; });
    return idx;
  };
  std::vector<ElementSet> guesses;
  switch (cfg.mode) {
    case GuessMode::oracle_assisted: {
      const BruteForceResult bf = brute_force_msc(norm);
      if (!bf.feasible) throw SolverError("oracle-assisted guessing: instance is infeasible");
      const auto top = by_cost_desc(bf.set.indices());
      const std::size_t k = std::min(L, top.size());
      guesses.push_back(ElementSet::from_indices(n, std::span(top.data(), k)));
      break;
    }
    case GuessMode::heuristic_topcost: {
      std::vector<Index> all(n);
      std::iota(all.begin(), all.end(), Index{0});
      const auto top = by_cost_desc(all);
      const std::size_t k = std::min(L, n);
      guesses.push_back(ElementSet::from_indices(n, std::span(top.data(), k)));
      if (k > 0) guesses.push_back(ElementSet(n));
      break;
    }
    case GuessMode::exact_enumeration: {
      const std::size_t k_max = std::min(L, n);
      double count = 0.0, binom = 1.0;
      for (std::size_t k = 0; k <= k_max; ++k) {
        count += binom;
        binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
      }
      if (count > static_cast<double>(cfg.max_guesses)) {
        throw CapacityError("exact_enumeration would try " + std::to_string(count) +
                            " guesses, above the ceiling " + std::to_string(cfg.max_guesses));
      }
      for (std::size_t k = 0; k <= k_max; ++k) {
        std::vector<Index> comb(k);
        std::iota(comb.begin(), comb.end(), Index{0});
        for (;;) {
          guesses.push_back(ElementSet::from_indices(n, comb));
          std::size_t pos = k;
          while (pos > 0 && comb[pos - 1] == n - k + pos - 1) --pos;
          if (pos == 0) break;
          ++comb[pos - 1];
          for (std::size_t q = pos; q < k; ++q) comb[q] = comb[q - 1] + 1;
        }
      }
      break;
    }
  }
  return guesses;
}

namespace {

struct RoundResult {
  GuessOutcome chosen;
  std::size_t tried = 0;
};

RoundResult solve_round(const MscInstance& norm, double eps, std::size_t L, const GuessConfig& cfg,
                        const RngStream& rng) {
  RoundResult rr;
  if (all_zero(norm)) {
    rr.chosen = run_guess(norm, norm.empty_set(), 0, eps, rng);
    rr.tried = 1;
    return rr;
  }
  const std::vector<ElementSet> guesses = build_guesses(norm, L, cfg);
  std::vector<GuessOutcome> outcomes(guesses.size());
#pragma omp parallel for schedule(dynamic, 1) if (guesses.size() > 1)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(guesses.size()); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      outcomes[idx] = run_guess(norm, guesses[idx], idx, eps, rng.split(idx));
    } catch (const std::exception& ex) {
      outcomes[idx].report.guess_index = idx;
      outcomes[idx].report.outcome = std::string("error: ") + ex.what();
    }
  }
  rr.tried = guesses.size();
  std::size_t best = outcomes.size();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (!outcomes[k].report.feasible) continue;
    if (best == outcomes.size() ||
        outcomes[k].report.cost_total < outcomes[best].report.cost_total) {
      best = k;
    }
  }
  if (best == outcomes.size()) {
    throw SolverError("all " + std::to_string(guesses.size()) + " guesses failed; first: " +
                      outcomes.front().report.outcome);
  }
  rr.chosen = std::move(outcomes[best]);
  return rr;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
}

void finish_report(const MscInstance& inst, const ElementSet& local_final, MscSolveReport& rep) {
  rep.final_set = inst.lift(local_final);
  rep.cost = inst.cost(local_final);
  rep.values = inst.values(local_final);
  rep.coverage_ok = true;
  for (std::size_t i = 0; i < inst.r(); ++i) {
    const double b = inst.constraints[i].requirement;
    rep.requirements.push_back(b);
    rep.ratios.push_back(b > 0.0 ? std::min(rep.values[i], b) / b : 1.0);
    if (rep.values[i] < rep.coverage_target * b - kCoverTol) rep.coverage_ok = false;
  }
}

MscSolveReport run_rounds(const MscInstance& inst, std::size_t alpha, double round_eps,
                          double target, const GuessConfig& cfg, RngStream& rng) {
  MscSolveReport rep;
  rep.guess_mode = to_string(cfg.mode);
  rep.alpha = alpha;
  rep.eps1 = rep.eps2 = round_eps / 4.0;
  rep.seed = rng.seed();
  rep.L = cfg.L_override.value_or(theoretical_L(inst.r(), rep.eps2));
  rep.coverage_target = target;

  const MscInstance norm = normalized(inst);
  ElementSet chosen(norm.n);
  for (std::size_t t = 0; t < alpha; ++t) {
    const MscInstance round_inst = t == 0 ? norm : normalized(residual_msc(norm, chosen, false));
    RoundResult rr = solve_round(round_inst, round_eps, rep.L, cfg, rng.split(t));
    rep.guesses_tried += rr.tried;
    chosen.unite(to_parent(norm, round_inst, rr.chosen.local_final));
    rep.rounds.push_back(std::move(rr.chosen.report));
  }
  finish_report(inst, to_parent(inst, norm, chosen), rep);
  return rep;
}

}  // namespace

MscSolveReport solve_msc_single(const MscInstance& inst, double eps, const GuessConfig& cfg,
                                RngStream& rng) {
  check_eps(eps);
  inst.validate();
  MscSolveReport rep = run_rounds(inst, 1, eps, kOneMinusInvE - eps, cfg, rng);
  rep.eps = eps;
  return rep;
}

MscSolveReport solve_msc_multi(const MscInstance& inst, std::size_t alpha, double eps,
                               const GuessConfig& cfg, RngStream& rng) {
  check_eps(eps);
  if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  inst.validate();
  const double round_eps = std::min(1.0 - 2.0 / std::exp(1.0), eps);
  const double target = 1.0 - std::exp(-static_cast<double>(alpha)) - eps;
  MscSolveReport rep = run_rounds(inst, alpha, round_eps, target, cfg, rng);
  rep.eps = eps;
  return rep;
}

}  // namespace mcover
