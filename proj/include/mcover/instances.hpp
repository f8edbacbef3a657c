#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/submodular.hpp"

namespace mcover {

using Cost = std::int64_t;

// Absolute tolerance for comparing coverage values against requirements.
inline constexpr double kCoverTol = 1e-9;

// Nonnegative integer element costs with a declared upper bound.
class CostFunction {
 public:
  CostFunction() = default;
  explicit CostFunction(std::vector<Cost> costs);
  CostFunction(std::vector<Cost> costs, Cost declared_max);

  // Integral inputs are kept verbatim. Fractional inputs are scaled onto [0, B] with
  // B = max(n^3, 1000), rounding up; scale() reports the multiplier that was applied.
  static CostFunction discretize(std::span<const double> raw);

  Cost operator[](Index e) const { return costs_[e]; }
  std::size_t size() const { return costs_.size(); }
  const std::vector<Cost>& values() const { return costs_; }
  Cost declared_max() const { return declared_max_; }
  double scale() const { return scale_; }

  Cost total(const ElementSet& s) const;
  Cost total() const;
  CostFunction restricted(std::span<const Index> kept) const;

 private:
  std::vector<Cost> costs_;
  Cost declared_max_ = 0;
  double scale_ = 1.0;
};

struct Constraint {
  OraclePtr f;
  double requirement = 0.0;
};

// min c(S) s.t. f_i(S) >= b_i. `origin` maps local element indices to the indices of the
// instance this one was derived from, all the way back to the loaded instance.
struct MscInstance {
  std::size_t n = 0;
  CostFunction costs;
  std::vector<Constraint> constraints;
  std::vector<Index> origin;
  std::size_t root_size = 0;
  std::vector<std::string> labels;

  std::size_t r() const { return constraints.size(); }
  Cost cost(const ElementSet& s) const { return costs.total(s); }
  ElementSet lift(const ElementSet& local) const;
  ElementSet empty_set() const { return ElementSet(n); }
  ElementSet ground() const { return ElementSet::full(n); }
  std::vector<double> values(const ElementSet& s) const;
  bool satisfies(const ElementSet& s, double fraction = 1.0) const;

  // Throws std::invalid_argument on malformed data.
  void validate() const;
};

MscInstance make_msc(CostFunction costs, std::vector<Constraint> constraints);

// Replaces each f_i by min(f_i, b_i). Rejects b_i > f_i(N).
MscInstance normalized(const MscInstance& inst);

MscInstance with_requirements(const MscInstance& inst, std::vector<double> requirements);

// Residual w.r.t. A over N \ A: f'_i = f_i|A, b'_i = max(0, b_i - f_i(A)). With truncate_costs,
// also drops elements costing more than every element of A.
MscInstance residual_msc(const MscInstance& inst, const ElementSet& anchor, bool truncate_costs);

struct CcfSet {
  Cost cost = 0;
  std::vector<Index> points;
};

// Covering coverage functions: pick sets so that A z >= b, z_j = [point j covered].
struct CcfInstance {
  std::size_t universe_size = 0;
  std::vector<CcfSet> sets;
  std::vector<std::vector<double>> matrix;  // r rows of length universe_size
  std::vector<double> requirements;
  std::vector<Index> point_origin;          // local point -> loaded point

  std::size_t r() const { return requirements.size(); }
  std::size_t m() const { return sets.size(); }
  Cost cost(const ElementSet& chosen) const;
  ElementSet covered_points(const ElementSet& chosen) const;
  std::vector<double> coverage(const ElementSet& chosen) const;
  bool satisfies(const ElementSet& chosen) const;
  // Max number of sets containing any single point.
  std::size_t max_frequency() const;

  void validate() const;
};

CcfInstance make_ccf(std::size_t universe_size, std::vector<CcfSet> sets,
                     std::vector<std::vector<double>> matrix, std::vector<double> requirements);

// Throws std::invalid_argument if choosing every set still misses some requirement.
void check_ccf_feasible(const CcfInstance& inst);

// Zeroes the columns of points covered by F; b_i <- max(0, b_i - f_i(F)).
CcfInstance residual_ccf(const CcfInstance& inst, const ElementSet& chosen);

// Intersects every set with U_sub and deletes the other columns; points are re-indexed.
CcfInstance restrict_universe(const CcfInstance& inst, const ElementSet& subset);

// The MSC view: elements are sets, f_i is weighted coverage with weights from row i.
MscInstance ccf_as_msc(const CcfInstance& inst);

}  // namespace mcover
