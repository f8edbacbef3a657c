#include "mcover/ccf_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mcover/errors.hpp"
#include "mcover/extension.hpp"
#include "mcover/fractional.hpp"
#include "mcover/lp_simplex.hpp"
#include "mcover/rounding.hpp"

namespace mcover {

namespace {
const double kE = std::exp(1.0);
const double kOneMinusInvE = 1.0 - 1.0 / kE;
// LP solutions satisfy rows to the simplex feasibility tolerance.
constexpr double kLpSlack = 1e-6;
}  // namespace

std::size_t ccf_guess_count(std::size_t r, double eps) {
  const double ell = lipschitz_ell(r, eps);
  return r * static_cast<std::size_t>(std::ceil(std::log(1.0 / eps) / ell)) + r;
}

double heavy_threshold(double eps) { return kOneMinusInvE * (1.0 - eps); }

HeavySplit heavy_shallow_split(const std::vector<double>& z, double eps) {
  const double tau = heavy_threshold(eps);
  HeavySplit out;
  for (Index j = 0; j < z.size(); ++j) {
    if (!(z[j] >= 0.0 && z[j] <= 1.0)) throw std::invalid_argument("z must lie in [0,1]");
    (z[j] >= tau ? out.heavy : out.shallow).push_back(j);
  }
  return out;
}

namespace {

std::vector<double> fractional_cover(const CcfInstance& inst, const std::vector<double>& x) {
  std::vector<double> sum(inst.universe_size, 0.0);
  for (Index i = 0; i < inst.m(); ++i) {
    for (Index p : inst.sets[i].points) sum[p] += x[i];
  }
  return sum;
}

double fractional_cost(const CcfInstance& inst, const std::vector<double>& x) {
  double total = 0.0;
  for (Index i = 0; i < inst.m(); ++i) total += static_cast<double>(inst.sets[i].cost) * x[i];
  return total;
}

void check_point(const CcfInstance& inst, const std::vector<double>& x) {
  if (x.size() != inst.m()) throw std::domain_error("cover oracle: one x value per set expected");
}

}  // namespace

ThresholdOracle::ThresholdOracle(std::size_t k) : k_(k) {
  if (k == 0) throw std::invalid_argument("threshold oracle needs k >= 1");
}

ElementSet ThresholdOracle::cover(const CcfInstance& presented, const std::vector<double>& x,
                                  RngStream&) const {
  check_point(presented, x);
  if (presented.max_frequency() > k_) {
    throw std::invalid_argument("threshold oracle: a point lies in " +
                                std::to_string(presented.max_frequency()) + " sets, above k = " +
                                std::to_string(k_));
  }
  ElementSet out(presented.m());
  const double cut = 1.0 / static_cast<double>(k_) - kLpSlack;
  for (Index i = 0; i < presented.m(); ++i) {
    if (x[i] >= cut) out.insert(i);
  }
  return out;
}

double GenericOracle::beta(const CcfInstance& presented) const {
  return std::ceil(2.0 * std::log(static_cast<double>(presented.universe_size) + 1.0));
}

ElementSet GenericOracle::cover(const CcfInstance& presented, const std::vector<double>& x,
                                RngStream& rng) const {
  check_point(presented, x);
  const auto repeats = static_cast<std::size_t>(std::max(1.0, beta(presented)));
  const FractionalPoint p(std::vector<double>(x.begin(), x.end()));
  const ElementSet everything = ElementSet::full(presented.universe_size);
  ElementSet out(presented.m());
  for (int attempt = 0; attempt < 64; ++attempt) {
    out.clear();
    for (std::size_t t = 0; t < repeats; ++t) out.unite(independent_round(p, rng));
    if (presented.covered_points(out) == everything) return out;
  }
  const ElementSet covered = presented.covered_points(out);
  std::vector<Index> best(presented.universe_size, presented.m());
  for (Index i = 0; i < presented.m(); ++i) {
    for (Index q : presented.sets[i].points) {
      if (best[q] == presented.m() || x[i] > x[best[q]]) best[q] = i;
    }
  }
  for (Index q = 0; q < presented.universe_size; ++q) {
    if (!covered.contains(q) && best[q] < presented.m()) out.insert(best[q]);
  }
  return out;
}

HeavyCover cover_heavy(const CcfInstance& presented, const std::vector<double>& x,
                       const FullCoverOracle& oracle, RngStream& rng) {
  check_point(presented, x);
  const auto sum = fractional_cover(presented, x);
  for (Index q = 0; q < presented.universe_size; ++q) {
    if (sum[q] < 1.0 - kLpSlack) {
      throw std::invalid_argument("cover_heavy: point " + std::to_string(q) +
                                  " is fractionally covered only " + std::to_string(sum[q]));
    }
  }
  HeavyCover out;
  out.fractional_cost = fractional_cost(presented, x);
  out.beta = oracle.beta(presented);
  if (presented.universe_size == 0) {
    out.sets = ElementSet(presented.m());
    return out;
  }
  out.sets = oracle.cover(presented, x, rng);
  if (presented.covered_points(out.sets) != ElementSet::full(presented.universe_size)) {
    throw SolverError("cover oracle '" + oracle.name() + "' left a heavy point uncovered");
  }
  out.cost = presented.cost(out.sets);
  const double bound = out.beta * out.fractional_cost;
  out.within_bound = static_cast<double>(out.cost) <= bound + kLpSlack * std::max(1.0, bound);
  if (!out.within_bound && oracle.worst_case_beta()) {
    throw SolverError("cover oracle '" + oracle.name() + "' exceeded its beta bound");
  }
  return out;
}

MbcGreedyResult mbc_greedy_fix(const CcfInstance& residual, std::size_t i,
                               std::optional<Cost> budget) {
  if (i >= residual.r()) throw std::out_of_range("mbc_greedy_fix: constraint index");
  if (budget && *budget < 0) throw std::invalid_argument("mbc_greedy_fix: budget must be >= 0");
  const auto& row = residual.matrix[i];
  const double need = residual.requirements[i];
  MbcGreedyResult out;
  out.sets = ElementSet(residual.m());
  ElementSet covered(residual.universe_size);
  for (;;) {
    if (out.weight >= need - kCoverTol) {
      out.satisfied = true;
      return out;
    }
    if (budget && out.cost >= *budget && !out.sets.empty()) return out;
    Index best = residual.m();
    double best_gain = 0.0;
    for (Index s = 0; s < residual.m(); ++s) {
      if (out.sets.contains(s)) continue;
      double gain = 0.0;
      for (Index p : residual.sets[s].points) {
        if (!covered.contains(p)) gain += row[p];
      }
      if (gain <= kCoverTol) continue;
      const Cost c = residual.sets[s].cost;
      bool better = best == residual.m();
      if (!better) {
        const Cost cb = residual.sets[best].cost;
        if (c == 0 || cb == 0) {
          better = (c == 0 && cb != 0) || (c == 0 && cb == 0 && gain > best_gain);
        } else {
          better = gain * static_cast<double>(cb) > best_gain * static_cast<double>(c);
        }
      }
      if (better) {
        best = s;
        best_gain = gain;
      }
    }
    if (best == residual.m()) return out;
    out.sets.insert(best);
    out.cost += residual.sets[best].cost;
    out.weight += best_gain;
    for (Index p : residual.sets[best].points) covered.insert(p);
  }
}

double ccf_internal_eps(double eps_star) {
  if (!(eps_star > 0.0) || !std::isfinite(eps_star)) {
    throw std::invalid_argument("eps* must be positive");
  }
  const double k = eps_star * (kE - 1.0) / kE;
  return k / (1.0 + k);
}

namespace {

// Keeps the listed sets (in order); points are unchanged.
CcfInstance select_sets(const CcfInstance& inst, const std::vector<Index>& kept) {
  CcfInstance out = inst;
  out.sets.clear();
  for (Index i : kept) out.sets.push_back(inst.sets[i]);
  return out;
}

ElementSet lift_sets(std::size_t m, const std::vector<Index>& kept, const ElementSet& local) {
  ElementSet out(m);
  local.for_each([&](Index i) { out.insert(kept[i]); });
  return out;
}

bool all_zero(const std::vector<double>& b) {
  return std::all_of(b.begin(), b.end(), [](double v) { return v <= kCoverTol; });
}

CcfGuessReport run_guess(const CcfInstance& inst, const ElementSet& pre, std::size_t index,
                         double eps, const FullCoverOracle& oracle, RngStream rng) {
  const std::size_t m = inst.m();
  CcfGuessReport rep;
  rep.guess_index = index;
  rep.s_pre = pre;
  rep.cost_pre = inst.cost(pre);
  rep.s_he = rep.s_sh = ElementSet(m);
  rep.final_set = pre;
  rep.cost_total = rep.cost_pre;
  if (inst.satisfies(pre)) {
    rep.feasible = true;
    rep.outcome = pre.empty() ? "empty" : "pre_only";
    return rep;
  }

  // Sets costlier than the cheapest guessed set cannot be in an optimum extending `pre`.
  Cost pre_min = std::numeric_limits<Cost>::max();
  pre.for_each([&](Index i) { pre_min = std::min(pre_min, inst.sets[i].cost); });
  std::vector<Index> kept;
  for (Index i = 0; i < m; ++i) {
    if (pre.contains(i)) continue;
    if (inst.sets[i].cost > pre_min) {
      ++rep.pruned_sets;
      continue;
    }
    kept.push_back(i);
  }
  const CcfInstance res = select_sets(residual_ccf(inst, pre), kept);
  if (!res.satisfies(ElementSet::full(res.m()))) {
    rep.outcome = "pruned residual cannot meet its requirements";
    return rep;
  }

  const LPSolution lp = solve_lp(build_ccf_lp(res));
  if (lp.status != LpStatus::optimal) {
    rep.outcome = std::string("LP ") + to_string(lp.status);
    return rep;
  }
  rep.lp_objective = lp.objective;
  const double scale = (kE / (kE - 1.0)) / (1.0 - eps);
  std::vector<double> x_scaled(res.m());
  for (Index i = 0; i < res.m(); ++i) {
    x_scaled[i] = std::clamp(scale * lp.x[ccf_lp_set_var(res, i)], 0.0, 1.0);
  }
  std::vector<double> z(res.universe_size);
  for (Index j = 0; j < res.universe_size; ++j) {
    z[j] = std::clamp(lp.x[ccf_lp_point_var(res, j)], 0.0, 1.0);
  }
  // Points with no weight left in any row are irrelevant to every constraint; the family is
  // deletion-closed, so they are dropped instead of being handed to the cover oracle.
  ElementSet live(res.universe_size);
  for (Index j = 0; j < res.universe_size; ++j) {
    for (std::size_t k = 0; k < res.r(); ++k) {
      if (res.matrix[k][j] > 0.0) live.insert(j);
    }
  }
  const HeavySplit split = heavy_shallow_split(z, eps);
  ElementSet heavy(res.universe_size), shallow(res.universe_size);
  for (Index j : split.heavy) {
    if (live.contains(j)) heavy.insert(j);
  }
  for (Index j : split.shallow) {
    if (live.contains(j)) shallow.insert(j);
  }
  heavy.for_each([&](Index j) { rep.heavy.push_back(res.point_origin[j]); });
  rep.shallow_count = shallow.size();

  RngStream oracle_rng = rng.split(1);
  try {
    rep.heavy_cover = cover_heavy(restrict_universe(res, heavy), x_scaled, oracle, oracle_rng);
  } catch (const SolverError& ex) {
    rep.outcome = ex.what();
    return rep;
  }
  const ElementSet& s_he = rep.heavy_cover.sets;

  ElementSet s_sh(res.m());
  const CcfInstance shallow_inst = restrict_universe(residual_ccf(res, s_he), shallow);
  // Nothing left to round toward when the heavy cover already meets every row.
  if (!all_zero(shallow_inst.requirements)) {
    std::vector<double> targets;
    for (double b : shallow_inst.requirements) targets.push_back(b / (1.0 - eps));
    const MscInstance as_msc = with_requirements(ccf_as_msc(shallow_inst), targets);
    RngStream round_rng = rng.split(2);
    const RoundingOutcome ro = round_fractional(as_msc, FractionalPoint(x_scaled), eps, round_rng);
    rep.precondition_checked = ro.precondition_checked;
    rep.precondition_holds = ro.precondition_holds;
    s_sh = ro.final_set;
  }

  const ElementSet chosen = set_union(s_he, s_sh);
  const CcfInstance after = residual_ccf(res, chosen);
  ElementSet fixes(res.m());
  for (std::size_t i = 0; i < after.r(); ++i) {
    if (after.requirements[i] <= kCoverTol) continue;
    const MbcGreedyResult g = mbc_greedy_fix(after, i);
    if (!g.satisfied) {
      rep.outcome = "greedy fix ran out of sets";
      return rep;
    }
    rep.fixes.push_back({i, lift_sets(m, kept, g.sets), g.cost});
    fixes.unite(g.sets);
  }

  rep.s_he = lift_sets(m, kept, s_he);
  rep.s_sh = lift_sets(m, kept, s_sh);
  rep.cost_he = res.cost(s_he);
  rep.cost_sh = res.cost(s_sh);
  rep.cost_fix = res.cost(fixes);
  rep.final_set = set_union(pre, lift_sets(m, kept, set_union(chosen, fixes)));
  rep.cost_total = inst.cost(rep.final_set);
  rep.feasible = inst.satisfies(rep.final_set);
  rep.outcome = rep.feasible ? "full" : "final collection misses a requirement";
  return rep;
}

}  // namespace

CcfSolveReport solve_ccf(const CcfInstance& inst, double eps_star, const FullCoverOracle& oracle,
                         const GuessConfig& cfg, RngStream& rng) {
  inst.validate();
  check_ccf_feasible(inst);
  CcfSolveReport rep;
  rep.guess_mode = to_string(cfg.mode);
  rep.oracle = oracle.name();
  rep.eps_star = eps_star;
  rep.eps = ccf_internal_eps(eps_star);
  rep.tau = heavy_threshold(rep.eps);
  rep.scale = (kE / (kE - 1.0)) / (1.0 - rep.eps);
  rep.beta = oracle.beta(inst);
  rep.beta_worst_case = oracle.worst_case_beta();
  rep.seed = rng.seed();
  rep.L = cfg.L_override.value_or(ccf_guess_count(inst.r(), rep.eps));
  rep.requirements = inst.requirements;

  std::vector<ElementSet> guesses;
  if (all_zero(inst.requirements)) {
    guesses.push_back(ElementSet(inst.m()));
  } else {
    guesses = build_guesses(ccf_as_msc(inst), rep.L, cfg);
  }
  std::vector<CcfGuessReport> outcomes(guesses.size());
#pragma omp parallel for schedule(dynamic, 1) if (guesses.size() > 1)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(guesses.size()); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      outcomes[idx] = run_guess(inst, guesses[idx], idx, rep.eps, oracle, rng.split(idx));
    } catch (const std::exception& ex) {
      outcomes[idx].guess_index = idx;
      outcomes[idx].outcome = std::string("error: ") + ex.what();
    }
  }
  rep.guesses_tried = guesses.size();
  std::size_t best = outcomes.size();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (!outcomes[k].feasible) continue;
    if (best == outcomes.size() || outcomes[k].cost_total < outcomes[best].cost_total) best = k;
  }
  if (best == outcomes.size()) {
    throw SolverError("all " + std::to_string(guesses.size()) + " guesses failed; first: " +
                      outcomes.front().outcome);
  }
  rep.chosen = std::move(outcomes[best]);
  rep.final_set = rep.chosen.final_set;
  rep.cost = inst.cost(rep.final_set);
  rep.coverage = inst.coverage(rep.final_set);
  rep.feasible = inst.satisfies(rep.final_set);
  return rep;
}

}  // namespace mcover
