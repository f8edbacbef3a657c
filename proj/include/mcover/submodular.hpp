#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcover/element_set.hpp"

namespace mcover {

// Value oracle for a normalized monotone submodular function over {0..n-1}.
// Implementations are immutable after construction and safe to share across threads.
class SubmodularOracle {
 public:
  virtual ~SubmodularOracle() = default;

  virtual std::size_t ground_size() const = 0;
  // `s.universe()` must equal ground_size(); callers go through eval() for the check.
  virtual double value(const ElementSet& s) const = 0;
  virtual std::string family() const = 0;
};

using OraclePtr = std::shared_ptr<const SubmodularOracle>;

// f(S), with the domain check. Throws std::domain_error on a ground-set mismatch.
double eval(const SubmodularOracle& f, const ElementSet& s);

// f(A + e) - f(A).
double marginal(const SubmodularOracle& f, Index e, const ElementSet& a);

// f(S) = total weight of points covered by the union of the elements' point sets.
class WeightedCoverageFunction final : public SubmodularOracle {
 public:
  WeightedCoverageFunction(std::vector<std::vector<Index>> covers, std::vector<double> weights);

  std::size_t ground_size() const override { return covers_.size(); }
  double value(const ElementSet& s) const override;
  std::string family() const override { return "coverage"; }

  std::size_t num_points() const { return weights_.size(); }
  const std::vector<Index>& covers(Index e) const { return covers_[e]; }
  const std::vector<std::vector<Index>>& all_covers() const { return covers_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<std::vector<Index>> covers_;
  std::vector<double> weights_;
  std::size_t words_per_element_ = 0;
  std::vector<std::uint64_t> bits_;  // element-major point bitsets
};

// Modular function w(S) = sum of per-element weights, as a coverage function with private points.
std::shared_ptr<WeightedCoverageFunction> make_modular(const std::vector<double>& weights);

// min(base(S), cap)
class TruncatedFunction final : public SubmodularOracle {
 public:
  TruncatedFunction(OraclePtr base, double cap);

  std::size_t ground_size() const override { return base_->ground_size(); }
  double value(const ElementSet& s) const override;
  std::string family() const override { return "truncated"; }

  double cap() const { return cap_; }
  const OraclePtr& base() const { return base_; }

 private:
  OraclePtr base_;
  double cap_;
};

// base(lift(S) + A) - base(A). The two-argument form keeps the base ground; the three-argument
// form re-indexes onto a sub-ground where local element k is base element kept[k].
class ResidualFunction final : public SubmodularOracle {
 public:
  ResidualFunction(OraclePtr base, ElementSet anchor);
  ResidualFunction(OraclePtr base, ElementSet anchor, std::vector<Index> kept);

  std::size_t ground_size() const override { return local_size_; }
  double value(const ElementSet& s) const override;
  std::string family() const override { return "residual"; }

  const ElementSet& anchor() const { return anchor_; }
  double anchor_value() const { return anchor_value_; }

 private:
  OraclePtr base_;
  ElementSet anchor_;
  std::vector<Index> kept_;
  bool reindexed_ = false;
  std::size_t local_size_;
  double anchor_value_;
};

}  // namespace mcover
