#include "mcover/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mcover {

CostFunction::CostFunction(std::vector<Cost> costs) : costs_(std::move(costs)) {
  declared_max_ = 0;
  for (Cost c : costs_) {
    if (c < 0) throw std::invalid_argument("costs must be nonnegative");
    declared_max_ = std::max(declared_max_, c);
  }
}

CostFunction::CostFunction(std::vector<Cost> costs, Cost declared_max)
    : costs_(std::move(costs)), declared_max_(declared_max) {
  for (Cost c : costs_) {
    if (c < 0) throw std::invalid_argument("costs must be nonnegative");
    if (c > declared_max_) throw std::invalid_argument("cost exceeds declared maximum");
  }
}

CostFunction CostFunction::discretize(std::span<const double> raw) {
  double max_raw = 0.0;
  bool integral = true;
  for (double c : raw) {
    if (!std::isfinite(c) || c < 0.0) throw std::invalid_argument("costs must be finite and >= 0");
    max_raw = std::max(max_raw, c);
    if (c != std::floor(c) || c > 9.0e15) integral = false;
  }
  std::vector<Cost> out(raw.size());
  if (integral) {
    for (std::size_t e = 0; e < raw.size(); ++e) out[e] = static_cast<Cost>(raw[e]);
    return CostFunction(std::move(out));
  }
  const double n = static_cast<double>(raw.size());
  const double bound = std::max(n * n * n, 1000.0);
  const double scale = bound / max_raw;
  for (std::size_t e = 0; e < raw.size(); ++e) {
    out[e] = static_cast<Cost>(std::ceil(raw[e] * scale - 1e-9));
  }
  CostFunction f(std::move(out), static_cast<Cost>(bound));
  f.scale_ = scale;
  return f;
}

Cost CostFunction::total(const ElementSet& s) const {
  Cost sum = 0;
  s.for_each([&](Index e) { sum += costs_[e]; });
  return sum;
}

Cost CostFunction::total() const { return std::accumulate(costs_.begin(), costs_.end(), Cost{0}); }

CostFunction CostFunction::restricted(std::span<const Index> kept) const {
  CostFunction f;
  f.costs_.reserve(kept.size());
  for (Index e : kept) f.costs_.push_back(costs_[e]);
  f.declared_max_ = declared_max_;
  f.scale_ = scale_;
  return f;
}

ElementSet MscInstance::lift(const ElementSet& local) const {
  ElementSet out(root_size);
  local.for_each([&](Index e) { out.insert(origin[e]); });
  return out;
}

std::vector<double> MscInstance::values(const ElementSet& s) const {
  std::vector<double> v;
  v.reserve(constraints.size());
  for (const auto& c : constraints) v.push_back(eval(*c.f, s));
  return v;
}

bool MscInstance::satisfies(const ElementSet& s, double fraction) const {
  for (const auto& c : constraints) {
    if (eval(*c.f, s) < fraction * c.requirement - kCoverTol) return false;
  }
  return true;
}

void MscInstance::validate() const {
  if (costs.size() != n) throw std::invalid_argument("cost vector length differs from ground size");
  if (origin.size() != n) throw std::invalid_argument("origin map length differs from ground size");
  for (Index o : origin) {
    if (o >= root_size) throw std::invalid_argument("origin index outside root ground");
  }
  if (constraints.empty()) throw std::invalid_argument("an MSC instance needs r >= 1 constraints");
  for (const auto& c : constraints) {
    if (!c.f) throw std::invalid_argument("null constraint oracle");
    if (c.f->ground_size() != n) throw std::invalid_argument("constraint over the wrong ground");
    if (!std::isfinite(c.requirement) || c.requirement < 0.0) {
      throw std::invalid_argument("requirements must be finite and nonnegative");
    }
  }
}

MscInstance make_msc(CostFunction costs, std::vector<Constraint> constraints) {
  MscInstance inst;
  inst.n = costs.size();
  inst.costs = std::move(costs);
  inst.constraints = std::move(constraints);
  inst.origin.resize(inst.n);
  std::iota(inst.origin.begin(), inst.origin.end(), Index{0});
  inst.root_size = inst.n;
  inst.validate();
  return inst;
}

MscInstance normalized(const MscInstance& inst) {
  MscInstance out = inst;
  const ElementSet all = inst.ground();
  for (std::size_t i = 0; i < out.constraints.size(); ++i) {
    auto& c = out.constraints[i];
    const double top = eval(*c.f, all);
    if (c.requirement > top + kCoverTol) {
      throw std::invalid_argument("constraint " + std::to_string(i) + " has requirement " +
                                  std::to_string(c.requirement) + " above f(N) = " +
                                  std::to_string(top));
    }
    c.requirement = std::min(c.requirement, top);
    c.f = std::make_shared<TruncatedFunction>(c.f, c.requirement);
  }
  return out;
}

MscInstance with_requirements(const MscInstance& inst, std::vector<double> requirements) {
  if (requirements.size() != inst.r()) throw std::invalid_argument("requirement count mismatch");
  MscInstance out = inst;
  for (std::size_t i = 0; i < requirements.size(); ++i) {
    out.constraints[i].requirement = requirements[i];
  }
  return out;
}

MscInstance residual_msc(const MscInstance& inst, const ElementSet& anchor, bool truncate_costs) {
  if (anchor.universe() != inst.n) throw std::domain_error("residual_msc: anchor over wrong ground");
  Cost anchor_min = std::numeric_limits<Cost>::max();
  anchor.for_each([&](Index e) { anchor_min = std::min(anchor_min, inst.costs[e]); });

  std::vector<Index> kept;
  for (Index e = 0; e < inst.n; ++e) {
    if (anchor.contains(e)) continue;
    if (truncate_costs && !anchor.empty() && inst.costs[e] > anchor_min) continue;
    kept.push_back(e);
  }

  MscInstance out;
  out.n = kept.size();
  out.costs = inst.costs.restricted(kept);
  out.root_size = inst.root_size;
  out.origin.reserve(kept.size());
  for (Index e : kept) out.origin.push_back(inst.origin[e]);
  if (!inst.labels.empty()) {
    for (Index e : kept) out.labels.push_back(inst.labels[e]);
  }
  for (const auto& c : inst.constraints) {
    auto f = std::make_shared<ResidualFunction>(c.f, anchor, kept);
    const double b = std::max(0.0, c.requirement - f->anchor_value());
    out.constraints.push_back({std::move(f), b});
  }
  return out;
}

Cost CcfInstance::cost(const ElementSet& chosen) const {
  Cost sum = 0;
  chosen.for_each([&](Index s) { sum += sets[s].cost; });
  return sum;
}

ElementSet CcfInstance::covered_points(const ElementSet& chosen) const {
  ElementSet pts(universe_size);
  chosen.for_each([&](Index s) {
    for (Index p : sets[s].points) pts.insert(p);
  });
  return pts;
}

std::vector<double> CcfInstance::coverage(const ElementSet& chosen) const {
  const ElementSet pts = covered_points(chosen);
  std::vector<double> cov(r(), 0.0);
  for (std::size_t i = 0; i < r(); ++i) {
    pts.for_each([&](Index p) { cov[i] += matrix[i][p]; });
  }
  return cov;
}

bool CcfInstance::satisfies(const ElementSet& chosen) const {
  const auto cov = coverage(chosen);
  for (std::size_t i = 0; i < r(); ++i) {
    if (cov[i] < requirements[i] - kCoverTol) return false;
  }
  return true;
}

std::size_t CcfInstance::max_frequency() const {
  std::vector<std::size_t> freq(universe_size, 0);
  for (const auto& s : sets) {
    for (Index p : s.points) ++freq[p];
  }
  return freq.empty() ? 0 : *std::max_element(freq.begin(), freq.end());
}

void CcfInstance::validate() const {
  if (matrix.size() != requirements.size()) {
    throw std::invalid_argument("matrix row count differs from requirement count");
  }
  for (const auto& row : matrix) {
    if (row.size() != universe_size) throw std::invalid_argument("matrix row has wrong length");
    for (double a : row) {
      if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("matrix entries must be >= 0");
    }
  }
  for (double b : requirements) {
    if (!std::isfinite(b) || b < 0.0) throw std::invalid_argument("requirements must be >= 0");
  }
  for (const auto& s : sets) {
    if (s.cost < 0) throw std::invalid_argument("set costs must be >= 0");
    for (Index p : s.points) {
      if (p >= universe_size) throw std::invalid_argument("set references a point outside universe");
    }
  }
  if (point_origin.size() != universe_size) throw std::invalid_argument("point origin map size");
}

CcfInstance make_ccf(std::size_t universe_size, std::vector<CcfSet> sets,
                     std::vector<std::vector<double>> matrix, std::vector<double> requirements) {
  CcfInstance inst;
  inst.universe_size = universe_size;
  inst.sets = std::move(sets);
  for (auto& s : inst.sets) {
    std::sort(s.points.begin(), s.points.end());
    s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
  }
  inst.matrix = std::move(matrix);
  inst.requirements = std::move(requirements);
  inst.point_origin.resize(universe_size);
  std::iota(inst.point_origin.begin(), inst.point_origin.end(), Index{0});
  inst.validate();
  return inst;
}

void check_ccf_feasible(const CcfInstance& inst) {
  if (!inst.satisfies(ElementSet::full(inst.m()))) {
    throw std::invalid_argument("CCF instance infeasible: all sets together miss a requirement");
  }
}

CcfInstance residual_ccf(const CcfInstance& inst, const ElementSet& chosen) {
  if (chosen.universe() != inst.m()) throw std::domain_error("residual_ccf: wrong set universe");
  CcfInstance out = inst;
  const auto cov = inst.coverage(chosen);
  const ElementSet pts = inst.covered_points(chosen);
  for (std::size_t i = 0; i < out.r(); ++i) {
    pts.for_each([&](Index p) { out.matrix[i][p] = 0.0; });
    out.requirements[i] = std::max(0.0, inst.requirements[i] - cov[i]);
  }
  return out;
}

CcfInstance restrict_universe(const CcfInstance& inst, const ElementSet& subset) {
  if (subset.universe() != inst.universe_size) throw std::domain_error("restrict_universe: bad set");
  std::vector<Index> local(inst.universe_size, inst.universe_size);
  CcfInstance out;
  subset.for_each([&](Index p) {
    local[p] = out.point_origin.size();
    out.point_origin.push_back(inst.point_origin[p]);
  });
  out.universe_size = out.point_origin.size();
  for (const auto& s : inst.sets) {
    CcfSet t{s.cost, {}};
    for (Index p : s.points) {
      if (subset.contains(p)) t.points.push_back(local[p]);
    }
    out.sets.push_back(std::move(t));
  }
  out.matrix.resize(inst.r());
  for (std::size_t i = 0; i < inst.r(); ++i) {
    subset.for_each([&](Index p) { out.matrix[i].push_back(inst.matrix[i][p]); });
  }
  out.requirements = inst.requirements;
  return out;
}

MscInstance ccf_as_msc(const CcfInstance& inst) {
  std::vector<std::vector<Index>> covers;
  covers.reserve(inst.m());
  std::vector<Cost> costs;
  for (const auto& s : inst.sets) {
    covers.push_back(s.points);
    costs.push_back(s.cost);
  }
  std::vector<Constraint> constraints;
  for (std::size_t i = 0; i < inst.r(); ++i) {
    auto f = std::make_shared<WeightedCoverageFunction>(covers, inst.matrix[i]);
    constraints.push_back({std::move(f), inst.requirements[i]});
  }
  return make_msc(CostFunction(std::move(costs)), std::move(constraints));
}

}  // namespace mcover
