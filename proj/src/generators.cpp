#include "mcover/generators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "mcover/submodular.hpp"

namespace mcover {

namespace {

Cost draw_cost(const CoverageParams& p, RngStream& rng) {
  if (p.cost_max < p.cost_min || p.cost_min < 0) throw std::invalid_argument("bad cost range");
  return p.cost_min + static_cast<Cost>(rng.below(static_cast<std::uint64_t>(p.cost_max - p.cost_min + 1)));
}

// Each of `count` owners gets a random nonempty subset of `points` points.
std::vector<std::vector<Index>> draw_memberships(std::size_t count, std::size_t points,
                                                 double density, RngStream& rng) {
  std::vector<std::vector<Index>> covers(count);
  for (auto& c : covers) {
    for (Index j = 0; j < points; ++j) {
      if (rng.bernoulli(density)) c.push_back(j);
    }
    if (c.empty() && points > 0) c.push_back(static_cast<Index>(rng.below(points)));
  }
  return covers;
}

std::vector<double> draw_weights(std::size_t points, int weight_max, RngStream& rng) {
  std::vector<double> w(points);
  for (auto& v : w) v = 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(weight_max)));
  return w;
}

}  // namespace

MscInstance random_coverage_msc(const CoverageParams& p, RngStream& rng) {
  std::vector<Cost> costs(p.n);
  for (auto& c : costs) c = draw_cost(p, rng);
  std::vector<Constraint> constraints;
  for (std::size_t i = 0; i < p.r; ++i) {
    auto covers = draw_memberships(p.n, p.points, p.density, rng);
    auto weights = draw_weights(p.points, p.weight_max, rng);
    auto f = std::make_shared<WeightedCoverageFunction>(std::move(covers), std::move(weights));
    const double top = eval(*f, ElementSet::full(p.n));
    const double b = std::max(1.0, std::floor(p.demand * top));
    constraints.push_back({std::move(f), std::min(b, top)});
  }
  return make_msc(CostFunction(std::move(costs)), std::move(constraints));
}

CcfInstance random_ccf(const CoverageParams& p, RngStream& rng) {
  std::vector<CcfSet> sets(p.n);
  auto covers = draw_memberships(p.n, p.points, p.density, rng);
  for (std::size_t i = 0; i < p.n; ++i) sets[i] = {draw_cost(p, rng), std::move(covers[i])};
  std::vector<std::vector<double>> matrix(p.r, std::vector<double>(p.points, 0.0));
  std::vector<double> req(p.r, 0.0);
  std::vector<bool> reachable(p.points, false);
  for (const auto& s : sets) {
    for (Index j : s.points) reachable[j] = true;
  }
  for (std::size_t k = 0; k < p.r; ++k) {
    double top = 0.0;
    for (std::size_t j = 0; j < p.points; ++j) {
      if (rng.bernoulli(0.6)) {
        matrix[k][j] = 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(p.weight_max)));
      }
      if (reachable[j]) top += matrix[k][j];
    }
    req[k] = std::min(top, std::max(top > 0.0 ? 1.0 : 0.0, std::floor(p.demand * top)));
  }
  return make_ccf(p.points, std::move(sets), std::move(matrix), std::move(req));
}

CcfInstance vertex_cover_like(const CoverageParams& p, RngStream& rng) {
  if (p.n < 2) throw std::invalid_argument("vertex_cover_like needs at least two vertices");
  std::vector<CcfSet> sets(p.n);
  for (auto& s : sets) s.cost = draw_cost(p, rng);
  for (std::size_t e = 0; e < p.points; ++e) {
    const Index u = static_cast<Index>(rng.below(p.n));
    Index v = static_cast<Index>(rng.below(p.n - 1));
    if (v >= u) ++v;
    sets[u].points.push_back(e);
    sets[v].points.push_back(e);
  }
  std::vector<std::vector<double>> matrix(p.r, std::vector<double>(p.points, 0.0));
  std::vector<double> req(p.r, 0.0);
  for (std::size_t k = 0; k < p.r; ++k) {
    double top = 0.0;
    for (std::size_t j = 0; j < p.points; ++j) {
      if (rng.bernoulli(0.6)) matrix[k][j] = 1.0;
      top += matrix[k][j];
    }
    req[k] = std::min(top, std::max(top > 0.0 ? 1.0 : 0.0, std::floor(p.demand * top)));
  }
  return make_ccf(p.points, std::move(sets), std::move(matrix), std::move(req));
}

PlantedMsc planted_optimum_msc(const CoverageParams& p, std::size_t planted_size, RngStream& rng) {
  if (planted_size > p.n) throw std::invalid_argument("planted set larger than the ground set");
  MscInstance inst = random_coverage_msc(p, rng);
  std::vector<Index> order(p.n);
  std::iota(order.begin(), order.end(), Index{0});
  for (std::size_t k = 0; k < planted_size; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(p.n - k));
    std::swap(order[k], order[pick]);
  }
  PlantedMsc out;
  out.planted = ElementSet::from_indices(p.n, std::span(order.data(), planted_size));
  for (auto& c : inst.constraints) c.requirement = eval(*c.f, out.planted);
  out.planted_cost = inst.cost(out.planted);
  out.instance = std::move(inst);
  return out;
}

FlmoInstance random_metric_flmo(const FlmoParams& p, RngStream& rng) {
  auto point = [&] {
    const auto side = static_cast<std::uint64_t>(std::max(1.0, p.side));
    return std::array<double, 2>{static_cast<double>(rng.below(side + 1)),
                                 static_cast<double>(rng.below(side + 1))};
  };
  std::vector<std::array<double, 2>> fac(p.facilities), cli(p.clients);
  for (auto& c : fac) c = point();
  for (auto& c : cli) c = point();
  std::vector<double> opening(p.facilities);
  for (auto& f : opening) f = std::round(rng.uniform(p.open_min, p.open_max));
  std::vector<std::vector<Index>> colors(p.r);
  for (Index j = 0; j < p.clients; ++j) {
    bool any = false;
    for (auto& c : colors) {
      if (rng.bernoulli(p.color_prob)) {
        c.push_back(j);
        any = true;
      }
    }
    if (!any && p.r > 0) colors[rng.below(p.r)].push_back(j);
  }
  std::vector<std::size_t> req(p.r);
  for (std::size_t k = 0; k < p.r; ++k) {
    const double want = std::round(p.demand * static_cast<double>(colors[k].size()));
    req[k] = std::min(colors[k].size(), static_cast<std::size_t>(std::max(1.0, want)));
  }
  return make_flmo_from_coords(std::move(fac), std::move(cli), std::move(opening),
                               std::move(colors), std::move(req));
}

}  // namespace mcover
