#include "mcover/flmo_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "mcover/brute_force.hpp"
#include "mcover/ccf_solver.hpp"
#include "mcover/errors.hpp"
#include "mcover/extension.hpp"
#include "mcover/rounding.hpp"

namespace mcover {

namespace {

const double kE = std::exp(1.0);
constexpr double kViolationTol = 1e-9;
constexpr double kSupportTol = 1e-9;
// Radius multiplier of the filtering step; 3κ = κ/(κ-1) at κ = 4/3 gives factor 4.
constexpr double kFilter = 4.0 / 3.0;

StarLpResult solve_star_lp(const ResidualStarSystem& sys, std::vector<Star> columns) {
  const FlmoInstance& inst = *sys.scaled->base;
  const std::size_t C = inst.num_clients;
  std::vector<std::ptrdiff_t> local(C, -1);
  for (std::size_t q = 0; q < sys.clients.size(); ++q) {
    local[sys.clients[q]] = static_cast<std::ptrdiff_t>(q);
  }
  LPModel model;
  // Star columns carry no upper bound, so the dual of a column is exactly
  // Σ_{j ∈ S} α_j <= c̄'(i,S) and pricing certifies optimality. Costs are nonnegative, so the
  // bound x <= 1 never changes the optimum; values above 1 (zero-cost stars) are clamped below.
  for (const auto& col : columns) model.add_variable(static_cast<double>(col.cost), 0.0, kInf);
  const std::size_t z0 = columns.size();
  for (std::size_t q = 0; q < sys.clients.size(); ++q) model.add_variable(0.0, 0.0, 1.0);
  std::vector<std::vector<std::pair<Index, double>>> cover(sys.clients.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (Index j : columns[c].clients) {
      cover[static_cast<std::size_t>(local[j])].emplace_back(c, 1.0);
    }
  }
  for (std::size_t q = 0; q < sys.clients.size(); ++q) {
    auto coeffs = std::move(cover[q]);
    coeffs.emplace_back(z0 + q, -1.0);
    model.add_row(std::move(coeffs), Sense::ge, 0.0);
  }
  for (std::size_t k = 0; k < inst.r(); ++k) {
    std::vector<std::pair<Index, double>> coeffs;
    for (Index j : inst.colors[k]) {
      if (local[j] >= 0) coeffs.emplace_back(z0 + static_cast<std::size_t>(local[j]), 1.0);
    }
    model.add_row(std::move(coeffs), Sense::ge, sys.requirements[k]);
  }

  const LPSolution sol = solve_lp(model);
  StarLpResult out;
  out.status = sol.status;
  out.columns = std::move(columns);
  out.z.assign(C, 0.0);
  out.alpha.assign(C, 0.0);
  if (sol.status != LpStatus::optimal) return out;
  out.objective = sol.objective;
  out.x.resize(z0);
  for (std::size_t c = 0; c < z0; ++c) out.x[c] = std::clamp(sol.x[c], 0.0, 1.0);
  for (std::size_t q = 0; q < sys.clients.size(); ++q) {
    out.z[sys.clients[q]] = std::clamp(sol.x[z0 + q], 0.0, 1.0);
    out.alpha[sys.clients[q]] = std::max(0.0, sol.duals[q]);
  }
  return out;
}

std::vector<Star> singleton_columns(const ResidualStarSystem& sys) {
  std::vector<Star> cols;
  for (Index i = 0; i < sys.allowed.size(); ++i) {
    for (Index j : sys.allowed[i]) {
      const Cost c = sys.star_cost(i, {j});
      if (!sys.guessed[i] && sys.G && c > *sys.G) continue;
      cols.push_back(Star{i, {j}, c});
    }
  }
  return cols;
}

}  // namespace

StarLpResult solve_restricted_lp(const ResidualStarSystem& sys, std::size_t max_rounds) {
  std::vector<Star> columns = singleton_columns(sys);
  std::set<std::pair<Index, std::vector<Index>>> seen;
  for (const auto& c : columns) seen.emplace(c.facility, c.clients);
  StarLpResult res;
  for (std::size_t round = 1;; ++round) {
    res = solve_star_lp(sys, std::move(columns));
    res.rounds = round;
    if (res.status != LpStatus::optimal) return res;
    columns = res.columns;
    bool added = false;
    for (auto& priced : price_all(sys, res.alpha)) {
      if (!priced || priced->violation <= kViolationTol) continue;
      if (!seen.emplace(priced->star.facility, priced->star.clients).second) continue;
      columns.push_back(std::move(priced->star));
      added = true;
    }
    if (!added) return res;
    if (round >= max_rounds) {
      res.converged = false;
      return res;
    }
  }
}

StarLpResult solve_full_star_lp(const ResidualStarSystem& sys) {
  std::vector<Star> columns;
  for (Index i = 0; i < sys.allowed.size(); ++i) {
    const auto& a = sys.allowed[i];
    if (sys.guessed[i]) {
      for (Index j : a) columns.push_back(Star{i, {j}, sys.star_cost(i, {j})});
      continue;
    }
    if (a.size() > 16) throw CapacityError("solve_full_star_lp: more than 16 clients per facility");
    for (std::uint64_t mask = 1; mask < (1ULL << a.size()); ++mask) {
      Star s{i, {}, 0};
      for (std::size_t q = 0; q < a.size(); ++q) {
        if ((mask >> q) & 1ULL) s.clients.push_back(a[q]);
      }
      s.cost = sys.star_cost(i, s.clients);
      if (sys.G && s.cost > *sys.G) continue;
      columns.push_back(std::move(s));
    }
  }
  StarLpResult res = solve_star_lp(sys, std::move(columns));
  res.rounds = 1;
  return res;
}

UcflPoint solve_ucfl_lp(const FlmoInstance& inst, const std::vector<Index>& clients,
                        const std::vector<double>& opening, double* objective) {
  const std::size_t F = inst.num_facilities, H = clients.size();
  LPModel model;
  for (Index i = 0; i < F; ++i) model.add_variable(opening[i], 0.0, kInf);
  for (Index i = 0; i < F; ++i) {
    for (std::size_t h = 0; h < H; ++h) model.add_variable(inst.d(i, clients[h]), 0.0, kInf);
  }
  auto xvar = [&](Index i, std::size_t h) { return F + i * H + h; };
  for (std::size_t h = 0; h < H; ++h) {
    std::vector<std::pair<Index, double>> coeffs;
    for (Index i = 0; i < F; ++i) coeffs.emplace_back(xvar(i, h), 1.0);
    model.add_row(std::move(coeffs), Sense::ge, 1.0);
  }
  for (Index i = 0; i < F; ++i) {
    for (std::size_t h = 0; h < H; ++h) model.add_row({{i, 1.0}, {xvar(i, h), -1.0}}, Sense::ge, 0.0);
  }
  const LPSolution sol = solve_lp(model);
  if (sol.status != LpStatus::optimal) throw SolverError("LP-FL not solved: " + std::string(to_string(sol.status)));
  UcflPoint p;
  p.y.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(F));
  p.x.assign(F, std::vector<double>(H, 0.0));
  for (Index i = 0; i < F; ++i) {
    for (std::size_t h = 0; h < H; ++h) p.x[i][h] = std::max(0.0, sol.x[xvar(i, h)]);
  }
  if (objective != nullptr) *objective = sol.objective;
  return p;
}

UcflResult cover_heavy_ucfl(const FlmoInstance& inst, const std::vector<Index>& clients,
                            const std::vector<double>& opening, const UcflPoint& point) {
  const std::size_t F = inst.num_facilities, H = clients.size();
  if (opening.size() != F || point.y.size() != F || point.x.size() != F) {
    throw std::domain_error("cover_heavy_ucfl: facility count mismatch");
  }
  UcflResult out;
  out.open = ElementSet(F);
  out.assignment.assign(H, F);
  for (Index i = 0; i < F; ++i) out.fractional_cost += opening[i] * point.y[i];
  std::vector<double> radius(H, 0.0);
  std::vector<std::vector<Index>> ball(H);
  for (std::size_t h = 0; h < H; ++h) {
    double mass = 0.0, conn = 0.0;
    for (Index i = 0; i < F; ++i) {
      mass += point.x[i][h];
      conn += point.x[i][h] * inst.d(i, clients[h]);
    }
    if (mass < 1.0 - 1e-6) {
      throw std::invalid_argument("cover_heavy_ucfl: client " + std::to_string(clients[h]) +
                                  " is fractionally connected only " + std::to_string(mass));
    }
    out.fractional_cost += conn;
    radius[h] = kFilter * conn / mass;
    const double tol = 1e-9 * std::max(1.0, radius[h]);
    for (Index i = 0; i < F; ++i) {
      if (inst.d(i, clients[h]) <= radius[h] + tol) ball[h].push_back(i);
    }
  }
  std::vector<std::size_t> order(H);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });
  std::vector<bool> done(H, false);
  for (std::size_t center : order) {
    if (done[center]) continue;
    Index pick = F;
    for (Index i : ball[center]) {
      if (pick == F || opening[i] < opening[pick]) pick = i;
    }
    out.open.insert(pick);
    std::vector<bool> in_ball(F, false);
    for (Index i : ball[center]) in_ball[i] = true;
    for (std::size_t h = 0; h < H; ++h) {
      if (done[h]) continue;
      const bool meets = std::any_of(ball[h].begin(), ball[h].end(), [&](Index i) { return in_ball[i]; });
      if (meets) {
        done[h] = true;
        out.assignment[h] = pick;
      }
    }
  }
  out.open.for_each([&](Index i) { out.cost += opening[i]; });
  for (std::size_t h = 0; h < H; ++h) out.cost += inst.d(out.assignment[h], clients[h]);
  const double bound = out.beta * out.fractional_cost;
  out.within_bound = out.cost <= bound + 1e-9 * std::max(1.0, bound);
  return out;
}

std::vector<TupleSpec> tuples_from_solution(const FlmoInstance& inst, const FlmoSolution& sol,
                                            double opt_guess, std::size_t T, std::size_t L) {
  const ScaledInstance s = scale_and_prune(inst, opt_guess);
  std::vector<TupleSpec> stars;
  sol.open.for_each([&](Index i) { stars.push_back(TupleSpec{i, {}, {}}); });
  for (Index j = 0; j < sol.assignment.size(); ++j) {
    if (!sol.assignment[j]) continue;
    for (auto& t : stars) {
      if (t.facility == *sol.assignment[j]) t.full_star.push_back(j);
    }
  }
  std::stable_sort(stars.begin(), stars.end(), [&](const TupleSpec& a, const TupleSpec& b) {
    return full_star_cost(s, a.facility, a.full_star) > full_star_cost(s, b.facility, b.full_star);
  });
  if (stars.size() > T) stars.resize(T);
  for (auto& t : stars) {
    std::vector<Index> by_far = t.full_star;
    std::stable_sort(by_far.begin(), by_far.end(), [&](Index a, Index b) {
      return inst.d(t.facility, a) > inst.d(t.facility, b);
    });
    if (by_far.size() > L) by_far.resize(L);
    std::sort(by_far.begin(), by_far.end());
    t.farthest = std::move(by_far);
  }
  return stars;
}

namespace {

struct GuessInput {
  double opt_guess = 0.0;
  std::vector<TupleSpec> tuples;
};

// Serves every listed client from its nearest open facility.
FlmoSolution assemble(const FlmoInstance& inst, const ElementSet& open,
                      const std::vector<bool>& served) {
  FlmoSolution sol;
  sol.open = open;
  sol.assignment.assign(inst.num_clients, std::nullopt);
  for (Index j = 0; j < inst.num_clients; ++j) {
    if (!served[j]) continue;
    Index at = inst.num_facilities;
    open.for_each([&](Index i) {
      if (at == inst.num_facilities || inst.d(i, j) < inst.d(at, j)) at = i;
    });
    if (at < inst.num_facilities) sol.assignment[j] = at;
  }
  return sol;
}

FlmoGuessReport run_guess(const FlmoInstance& inst, const GuessInput& in, std::size_t index,
                          double eps, RngStream rng) {
  const std::size_t F = inst.num_facilities, C = inst.num_clients;
  FlmoGuessReport rep;
  rep.guess_index = index;
  rep.opt_guess = in.opt_guess;
  const ScaledInstance scaled = scale_and_prune(inst, in.opt_guess);
  rep.B = scaled.B;
  for (const auto& t : in.tuples) {
    rep.tuples.push_back(GuessTuple{t.facility, t.farthest, full_star_cost(scaled, t.facility, t.full_star)});
  }
  const ResidualStarSystem sys = build_residual_system(scaled, rep.tuples);
  rep.G = sys.G;
  rep.residual_clients = sys.clients.size();
  rep.residual_requirements = sys.requirements;

  ElementSet open(F);
  std::vector<bool> served(C, false);
  for (const auto& t : rep.tuples) {
    open.insert(t.facility);
    for (Index j : t.farthest) served[j] = true;
  }
  auto finish = [&](std::string outcome) {
    rep.solution = assemble(inst, open, served);
    rep.cost = flmo_cost(inst, rep.solution);
    rep.feasible = flmo_feasible(inst, rep.solution);
    rep.outcome = rep.feasible ? std::move(outcome) : "final solution misses a color demand";
    return rep;
  };
  if (std::all_of(sys.requirements.begin(), sys.requirements.end(),
                  [](double b) { return b <= kCoverTol; })) {
    return finish(rep.tuples.empty() ? "empty" : "pre_only");
  }

  const StarLpResult lp = solve_restricted_lp(sys);
  rep.columns = lp.columns.size();
  rep.cg_rounds = lp.rounds;
  rep.cg_converged = lp.converged;
  if (lp.status != LpStatus::optimal) {
    rep.outcome = std::string("residual LP ") + to_string(lp.status);
    return rep;
  }
  rep.lp_objective = lp.objective;
  const double scale = (kE / (kE - 1.0)) / (1.0 - eps);

  std::vector<bool> live(C, false);
  for (const auto& color : inst.colors) {
    for (Index j : color) live[j] = true;
  }
  std::vector<double> z_res;
  for (Index j : sys.clients) z_res.push_back(lp.z[j]);
  const HeavySplit split = heavy_shallow_split(z_res, eps);
  std::vector<Index> shallow;
  for (Index q : split.heavy) {
    if (live[sys.clients[q]]) rep.heavy.push_back(sys.clients[q]);
  }
  for (Index q : split.shallow) {
    if (live[sys.clients[q]]) shallow.push_back(sys.clients[q]);
  }
  rep.shallow_count = shallow.size();

  // Heavy clients: the star point converted to LP-FL and scaled, with guessed facilities
  // already paid for, rounded on the original metric.
  std::vector<Index> support;
  for (std::size_t c = 0; c < lp.columns.size(); ++c) {
    if (lp.x[c] > kSupportTol) support.push_back(c);
  }
  rep.support_size = support.size();
  if (!rep.heavy.empty()) {
    std::vector<std::ptrdiff_t> hpos(C, -1);
    for (std::size_t h = 0; h < rep.heavy.size(); ++h) hpos[rep.heavy[h]] = static_cast<std::ptrdiff_t>(h);
    UcflPoint point;
    point.y.assign(F, 0.0);
    point.x.assign(F, std::vector<double>(rep.heavy.size(), 0.0));
    for (std::size_t c : support) {
      const Star& s = lp.columns[c];
      const double v = scale * lp.x[c];
      point.y[s.facility] += v;
      for (Index j : s.clients) {
        if (hpos[j] >= 0) point.x[s.facility][static_cast<std::size_t>(hpos[j])] += v;
      }
    }
    std::vector<double> opening = inst.opening;
    for (Index i = 0; i < F; ++i) {
      if (sys.guessed[i]) opening[i] = 0.0;
    }
    rep.ucfl = cover_heavy_ucfl(inst, rep.heavy, opening, point);
    if (!rep.ucfl.within_bound) {
      rep.outcome = "heavy-client rounding exceeded its factor";
      return rep;
    }
    open.unite(rep.ucfl.open);
    for (Index j : rep.heavy) served[j] = true;
  }

  // Shallow clients: the support stars as a set system over shallow clients.
  std::vector<std::ptrdiff_t> spos(C, -1);
  for (std::size_t q = 0; q < shallow.size(); ++q) spos[shallow[q]] = static_cast<std::ptrdiff_t>(q);
  std::vector<CcfSet> sets;
  std::vector<double> x_scaled;
  for (std::size_t c : support) {
    CcfSet s{lp.columns[c].cost, {}};
    for (Index j : lp.columns[c].clients) {
      if (spos[j] >= 0) s.points.push_back(static_cast<Index>(spos[j]));
    }
    sets.push_back(std::move(s));
    x_scaled.push_back(std::min(1.0, scale * lp.x[c]));
  }
  std::vector<std::vector<double>> matrix(inst.r(), std::vector<double>(shallow.size(), 0.0));
  std::vector<double> demand(inst.r(), 0.0);
  std::vector<bool> heavy_mask(C, false);
  for (Index j : rep.heavy) heavy_mask[j] = true;
  for (std::size_t k = 0; k < inst.r(); ++k) {
    double heavy_in = 0.0;
    for (Index j : inst.colors[k]) {
      if (spos[j] >= 0) matrix[k][static_cast<std::size_t>(spos[j])] = 1.0;
      if (heavy_mask[j]) heavy_in += 1.0;
    }
    demand[k] = std::max(0.0, sys.requirements[k] - heavy_in);
  }
  CcfInstance shallow_sys;
  shallow_sys.universe_size = shallow.size();
  shallow_sys.sets = std::move(sets);
  shallow_sys.matrix = std::move(matrix);
  shallow_sys.requirements = demand;
  shallow_sys.point_origin = shallow;

  ElementSet chosen(support.size());
  rep.rounding_met.assign(inst.r(), true);
  if (std::any_of(demand.begin(), demand.end(), [](double b) { return b > kCoverTol; })) {
    std::vector<double> targets;
    for (double b : demand) targets.push_back(b / (1.0 - eps));
    const MscInstance as_msc = with_requirements(ccf_as_msc(shallow_sys), targets);
    RngStream round_rng = rng.split(2);
    const RoundingOutcome ro = round_fractional(as_msc, FractionalPoint(x_scaled), eps, round_rng);
    rep.precondition_checked = ro.precondition_checked;
    rep.precondition_holds = ro.precondition_holds;
    chosen = ro.final_set;
    for (std::size_t k = 0; k < inst.r(); ++k) rep.rounding_met[k] = ro.met[k];
    chosen.for_each([&](Index c) { rep.rounded_stars.push_back(lp.columns[support[c]]); });
  }

  const CcfInstance after = residual_ccf(shallow_sys, chosen);
  ElementSet fixes(support.size());
  for (std::size_t k = 0; k < after.r(); ++k) {
    if (after.requirements[k] <= kCoverTol) continue;
    const MbcGreedyResult g = mbc_greedy_fix(after, k);
    if (!g.satisfied) {
      rep.outcome = "greedy fix ran out of support stars";
      return rep;
    }
    rep.fixed_colors.push_back(k);
    g.sets.for_each([&](Index c) { rep.fix_stars.push_back(lp.columns[support[c]]); });
    fixes.unite(g.sets);
  }
  set_union(chosen, fixes).for_each([&](Index c) {
    const Star& s = lp.columns[support[c]];
    open.insert(s.facility);
    for (Index j : s.clients) served[j] = true;
  });
  return finish("full");
}

// Lower bound: for every color, the cheapest facility plus its b_k closest possible clients.
double flmo_lower_bound(const FlmoInstance& inst) {
  double fmin = kInf;
  for (double f : inst.opening) fmin = std::min(fmin, f);
  double lb = 0.0;
  for (std::size_t k = 0; k < inst.r(); ++k) {
    if (inst.requirements[k] == 0) continue;
    std::vector<double> near;
    for (Index j : inst.colors[k]) {
      double m = kInf;
      for (Index i = 0; i < inst.num_facilities; ++i) m = std::min(m, inst.d(i, j));
      near.push_back(m);
    }
    std::sort(near.begin(), near.end());
    double v = fmin;
    for (std::size_t q = 0; q < inst.requirements[k]; ++q) v += near[q];
    lb = std::max(lb, v);
  }
  return lb;
}

std::vector<double> opt_grid(const FlmoInstance& inst, double eps) {
  double ub = 0.0;
  for (double f : inst.opening) ub += f;
  for (Index j = 0; j < inst.num_clients; ++j) {
    double m = kInf;
    for (Index i = 0; i < inst.num_facilities; ++i) m = std::min(m, inst.d(i, j));
    ub += m;
  }
  const double lb = flmo_lower_bound(inst);
  std::vector<double> grid;
  double g = std::max(ub, 1e-12);
  for (int t = 0; t < 64; ++t) {
    grid.push_back(g);
    g /= 1.0 + eps;
    if (g < lb * (1.0 - 1e-12) || g <= 1e-12) break;
  }
  return grid;
}

// All collections of at most T whole stars (distinct facilities, disjoint clients, at most
// L clients each).
std::vector<std::vector<TupleSpec>> enumerate_tuples(const FlmoInstance& inst, std::size_t T,
                                                     std::size_t L, std::size_t ceiling) {
  std::vector<TupleSpec> stars;
  const std::size_t C = inst.num_clients;
  for (Index i = 0; i < inst.num_facilities; ++i) {
    for (std::uint64_t mask = 1; mask < (1ULL << C); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) > L) continue;
      TupleSpec t{i, {}, {}};
      for (Index j = 0; j < C; ++j) {
        if ((mask >> j) & 1ULL) t.farthest.push_back(j);
      }
      t.full_star = t.farthest;
      stars.push_back(std::move(t));
    }
  }
  std::vector<std::vector<TupleSpec>> out{{}};
  std::vector<TupleSpec> cur;
  auto clash = [&](const TupleSpec& s) {
    for (const auto& t : cur) {
      if (t.facility == s.facility) return true;
      for (Index j : s.full_star) {
        if (std::binary_search(t.full_star.begin(), t.full_star.end(), j)) return true;
      }
    }
    return false;
  };
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (cur.size() == T) return;
    for (std::size_t s = from; s < stars.size(); ++s) {
      if (clash(stars[s])) continue;
      cur.push_back(stars[s]);
      out.push_back(cur);
      if (out.size() > ceiling) {
        throw CapacityError("exact_enumeration would try more than " + std::to_string(ceiling) +
                            " tuple collections");
      }
      self(self, s + 1);
      cur.pop_back();
    }
  };
  if (C > 20) throw CapacityError("exact_enumeration: more than 20 clients");
  rec(rec, 0);
  return out;
}

}  // namespace

FlmoSolveReport solve_flmo(const FlmoInstance& inst, double eps, const GuessConfig& cfg,
                           RngStream& rng) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  inst.validate();
  FlmoSolveReport rep;
  rep.guess_mode = to_string(cfg.mode);
  rep.eps = eps;
  rep.seed = rng.seed();
  rep.requirements = inst.requirements;
  const bool nothing = std::all_of(inst.requirements.begin(), inst.requirements.end(),
                                   [](std::size_t b) { return b == 0; });
  if (nothing) {
    rep.solution.open = ElementSet(inst.num_facilities);
    rep.solution.assignment.assign(inst.num_clients, std::nullopt);
    rep.chosen.feasible = true;
    rep.chosen.outcome = "empty";
    rep.chosen.solution = rep.solution;
    rep.served = flmo_served(inst, rep.solution);
    rep.feasible = true;
    return rep;
  }
  rep.L = cfg.L_override.value_or(ccf_guess_count(inst.r(), eps));
  rep.T = static_cast<std::size_t>(std::ceil(static_cast<double>(rep.L) / eps - 1e-9));

  std::vector<GuessInput> inputs;
  switch (cfg.mode) {
    case GuessMode::oracle_assisted: {
      const FlmoBruteForceResult bf = brute_force_flmo(inst);
      if (!bf.feasible) throw SolverError("oracle-assisted guessing: instance is infeasible");
      const double opt = std::max(bf.cost, 1e-12);
      rep.opt_guesses = {opt};
      inputs.push_back({opt, tuples_from_solution(inst, bf.solution, opt, rep.T, rep.L)});
      break;
    }
    case GuessMode::heuristic_topcost: {
      rep.opt_guesses = opt_grid(inst, eps);
      for (double g : rep.opt_guesses) inputs.push_back({g, {}});
      break;
    }
    case GuessMode::exact_enumeration: {
      rep.opt_guesses = opt_grid(inst, eps);
      const auto collections = enumerate_tuples(inst, rep.T, rep.L, cfg.max_guesses);
      if (collections.size() * rep.opt_guesses.size() > cfg.max_guesses) {
        throw CapacityError("exact_enumeration would try " +
                            std::to_string(collections.size() * rep.opt_guesses.size()) +
                            " guesses, above the ceiling " + std::to_string(cfg.max_guesses));
      }
      for (double g : rep.opt_guesses) {
        for (const auto& c : collections) inputs.push_back({g, c});
      }
      break;
    }
  }

  std::vector<FlmoGuessReport> outcomes(inputs.size());
#pragma omp parallel for schedule(dynamic, 1) if (inputs.size() > 1)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(inputs.size()); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      outcomes[idx] = run_guess(inst, inputs[idx], idx, eps, rng.split(idx));
    } catch (const std::exception& ex) {
      outcomes[idx].guess_index = idx;
      outcomes[idx].outcome = std::string("error: ") + ex.what();
    }
  }
  rep.guesses_tried = inputs.size();
  std::size_t best = outcomes.size();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (!outcomes[k].feasible) continue;
    if (best == outcomes.size() || outcomes[k].cost < outcomes[best].cost - 1e-12) best = k;
  }
  if (best == outcomes.size()) {
    throw SolverError("all " + std::to_string(inputs.size()) + " guesses failed; first: " +
                      outcomes.front().outcome);
  }
  rep.chosen = std::move(outcomes[best]);
  rep.solution = rep.chosen.solution;
  rep.cost = flmo_cost(inst, rep.solution);
  rep.served = flmo_served(inst, rep.solution);
  rep.feasible = flmo_feasible(inst, rep.solution);
  return rep;
}

}  // namespace mcover
