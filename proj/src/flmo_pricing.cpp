#include "mcover/flmo_pricing.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcover {

Cost scale_cost(double v, double opt_guess, Cost B) {
  const double bd = static_cast<double>(B);
  if (v <= opt_guess / bd) return 0;
  const double scaled = v * bd / opt_guess;
  return static_cast<Cost>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
}

ScaledInstance scale_and_prune(const FlmoInstance& inst, double opt_guess) {
  if (!(opt_guess > 0.0) || !std::isfinite(opt_guess)) {
    throw std::invalid_argument("scale_and_prune: OPT guess must be positive");
  }
  ScaledInstance s;
  s.base = &inst;
  s.opt_guess = opt_guess;
  const auto n = static_cast<Cost>(inst.num_facilities + inst.num_clients);
  s.B = n * n * n;
  const std::size_t F = inst.num_facilities, C = inst.num_clients;
  s.facility_ok.assign(F, false);
  s.f_bar.assign(F, 0);
  s.pair_ok.assign(F, std::vector<bool>(C, false));
  s.d_bar.assign(F, std::vector<Cost>(C, 0));
  for (Index i = 0; i < F; ++i) {
    s.facility_ok[i] = inst.opening[i] <= opt_guess;
    if (s.facility_ok[i]) s.f_bar[i] = scale_cost(inst.opening[i], opt_guess, s.B);
    for (Index j = 0; j < C; ++j) {
      const double d = inst.d(i, j);
      s.pair_ok[i][j] = d <= opt_guess;
      if (s.pair_ok[i][j]) s.d_bar[i][j] = scale_cost(d, opt_guess, s.B);
    }
  }
  return s;
}

Cost full_star_cost(const ScaledInstance& s, Index facility, const std::vector<Index>& clients) {
  Cost c = s.f_bar[facility];
  for (Index j : clients) c += s.d_bar[facility][j];
  return c;
}

Cost ResidualStarSystem::star_cost(Index facility, const std::vector<Index>& members) const {
  Cost c = guessed[facility] ? 0 : scaled->f_bar[facility];
  for (Index j : members) c += scaled->d_bar[facility][j];
  return c;
}

ResidualStarSystem build_residual_system(const ScaledInstance& scaled,
                                         const std::vector<GuessTuple>& tuples) {
  const FlmoInstance& inst = *scaled.base;
  const std::size_t F = inst.num_facilities, C = inst.num_clients;
  ResidualStarSystem sys;
  sys.scaled = &scaled;
  sys.guessed.assign(F, false);
  std::vector<bool> pre(C, false);
  std::vector<Cost> nearest_guessed(F, std::numeric_limits<Cost>::max());
  for (const auto& t : tuples) {
    if (t.facility >= F) throw std::invalid_argument("guess tuple names an unknown facility");
    if (sys.guessed[t.facility]) throw std::invalid_argument("two guess tuples share a facility");
    sys.guessed[t.facility] = true;
    for (Index j : t.farthest) {
      if (j >= C) throw std::invalid_argument("guess tuple names an unknown client");
      pre[j] = true;
      nearest_guessed[t.facility] = std::min(nearest_guessed[t.facility], scaled.d_bar[t.facility][j]);
    }
    sys.G = sys.G ? std::min(*sys.G, t.full_cost) : t.full_cost;
  }
  for (Index j = 0; j < C; ++j) {
    if (!pre[j]) sys.clients.push_back(j);
  }
  for (std::size_t k = 0; k < inst.r(); ++k) {
    std::size_t covered = 0;
    for (Index j : inst.colors[k]) covered += pre[j] ? 1 : 0;
    sys.requirements.push_back(
        std::max(0.0, static_cast<double>(inst.requirements[k]) - static_cast<double>(covered)));
  }
  sys.allowed.assign(F, {});
  for (Index i = 0; i < F; ++i) {
    if (!sys.guessed[i] && !scaled.facility_ok[i]) continue;
    for (Index j : sys.clients) {
      if (!scaled.pair_ok[i][j]) continue;
      if (sys.guessed[i] && scaled.d_bar[i][j] > nearest_guessed[i]) continue;
      sys.allowed[i].push_back(j);
    }
  }
  return sys;
}

PricedStar knapsack_best_star(const std::vector<double>& alpha, const std::vector<Cost>& weight,
                              Cost capacity) {
  if (alpha.size() != weight.size()) throw std::invalid_argument("knapsack: size mismatch");
  PricedStar best;
  if (capacity < 0) return best;
  std::vector<std::size_t> items;
  Cost useful = 0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (weight[k] < 0) throw std::invalid_argument("knapsack: negative weight");
    if (alpha[k] - static_cast<double>(weight[k]) > 0.0 && weight[k] <= capacity) {
      items.push_back(k);
      useful += weight[k];
    }
  }
  const Cost cap = std::min(capacity, useful);
  const auto W = static_cast<std::size_t>(cap);
  const double kNone = -std::numeric_limits<double>::infinity();
  // profit[w]: best profit at total weight exactly w; take[t][w]: item t used for it.
  std::vector<double> profit(W + 1, kNone);
  profit[0] = 0.0;
  std::vector<std::vector<bool>> take(items.size(), std::vector<bool>(W + 1, false));
  for (std::size_t t = 0; t < items.size(); ++t) {
    const std::size_t k = items[t];
    const auto w = static_cast<std::size_t>(weight[k]);
    const double p = alpha[k] - static_cast<double>(weight[k]);
    for (std::size_t c = W + 1; c-- > w;) {
      if (profit[c - w] == kNone) continue;
      const double cand = profit[c - w] + p;
      if (cand > profit[c] + 1e-12) {
        profit[c] = cand;
        take[t][c] = true;
      }
    }
  }
  std::size_t at = 0;
  for (std::size_t c = 1; c <= W; ++c) {
    if (profit[c] > profit[at] + 1e-12) at = c;
  }
  best.profit = profit[at];
  best.weight = static_cast<Cost>(at);
  for (std::size_t t = items.size(); t-- > 0;) {
    if (take[t][at]) {
      best.items.push_back(items[t]);
      at -= static_cast<std::size_t>(weight[items[t]]);
    }
  }
  std::sort(best.items.begin(), best.items.end());
  return best;
}

PricedStar knapsack_best_star_brute(const std::vector<double>& alpha,
                                    const std::vector<Cost>& weight, Cost capacity) {
  if (alpha.size() != weight.size()) throw std::invalid_argument("knapsack: size mismatch");
  if (alpha.size() > 20) throw std::invalid_argument("knapsack brute force: at most 20 items");
  PricedStar best;
  if (capacity < 0) return best;
  const std::size_t n = alpha.size();
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    Cost w = 0;
    double p = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if ((mask >> k) & 1ULL) {
        w += weight[k];
        p += alpha[k] - static_cast<double>(weight[k]);
      }
    }
    if (w > capacity) continue;
    if (p > best.profit + 1e-12 || (std::abs(p - best.profit) <= 1e-12 && w < best.weight)) {
      best.profit = p;
      best.weight = w;
      best.items.clear();
      for (std::size_t k = 0; k < n; ++k) {
        if ((mask >> k) & 1ULL) best.items.push_back(k);
      }
    }
  }
  return best;
}

std::optional<StarViolation> price_star(const ResidualStarSystem& sys, Index facility,
                                        const std::vector<double>& alpha) {
  const ScaledInstance& s = *sys.scaled;
  const auto& allowed = sys.allowed[facility];
  if (allowed.empty()) return std::nullopt;
  if (sys.guessed[facility]) {
    std::optional<StarViolation> best;
    for (Index j : allowed) {
      const double v = alpha[j] - static_cast<double>(s.d_bar[facility][j]);
      if (v < 0.0) continue;
      if (!best || v > best->violation) {
        best = StarViolation{Star{facility, {j}, s.d_bar[facility][j]}, v};
      }
    }
    return best;
  }
  const Cost f = s.f_bar[facility];
  Cost capacity = 0;
  if (sys.G) {
    capacity = *sys.G - f;
  } else {
    for (Index j : allowed) capacity += s.d_bar[facility][j];
  }
  if (capacity < 0) return std::nullopt;
  std::vector<double> a;
  std::vector<Cost> w;
  for (Index j : allowed) {
    a.push_back(alpha[j]);
    w.push_back(s.d_bar[facility][j]);
  }
  const PricedStar ps = knapsack_best_star(a, w, capacity);
  if (ps.items.empty()) return std::nullopt;
  const double violation = ps.profit - static_cast<double>(f);
  if (violation < 0.0) return std::nullopt;
  Star star{facility, {}, 0};
  for (std::size_t k : ps.items) star.clients.push_back(allowed[k]);
  star.cost = sys.star_cost(facility, star.clients);
  return StarViolation{std::move(star), violation};
}

std::optional<StarViolation> price_star_exhaustive(const ResidualStarSystem& sys, Index facility,
                                                   const std::vector<double>& alpha) {
  const ScaledInstance& s = *sys.scaled;
  const auto& allowed = sys.allowed[facility];
  if (allowed.size() > 20) throw std::invalid_argument("exhaustive pricing: at most 20 clients");
  const bool guessed = sys.guessed[facility];
  std::optional<StarViolation> best;
  for (std::uint64_t mask = 1; mask < (1ULL << allowed.size()); ++mask) {
    if (guessed && std::popcount(mask) != 1) continue;
    std::vector<Index> members;
    for (std::size_t k = 0; k < allowed.size(); ++k) {
      if ((mask >> k) & 1ULL) members.push_back(allowed[k]);
    }
    if (!guessed && sys.G && full_star_cost(s, facility, members) > *sys.G) continue;
    const Cost cost = sys.star_cost(facility, members);
    double v = -static_cast<double>(cost);
    for (Index j : members) v += alpha[j];
    if (v < 0.0) continue;
    if (!best || v > best->violation + 1e-12) best = StarViolation{Star{facility, members, cost}, v};
  }
  return best;
}

std::vector<std::optional<StarViolation>> price_all_serial(const ResidualStarSystem& sys,
                                                           const std::vector<double>& alpha) {
  std::vector<std::optional<StarViolation>> out(sys.allowed.size());
  for (Index i = 0; i < out.size(); ++i) out[i] = price_star(sys, i, alpha);
  return out;
}

std::vector<std::optional<StarViolation>> price_all(const ResidualStarSystem& sys,
                                                    const std::vector<double>& alpha) {
  std::vector<std::optional<StarViolation>> out(sys.allowed.size());
#pragma omp parallel for schedule(dynamic, 1) if (out.size() > 2)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(out.size()); ++i) {
    out[static_cast<std::size_t>(i)] = price_star(sys, static_cast<Index>(i), alpha);
  }
  return out;
}

}  // namespace mcover
