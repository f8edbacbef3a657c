#pragma once

#include <cstddef>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/instances.hpp"
#include "mcover/rng.hpp"
#include "mcover/submodular.hpp"

namespace mcover {

inline constexpr std::size_t kMaxExactMle = 20;

// A point of [0,1]^N. Constructors and set() reject coordinates outside [0,1].
class FractionalPoint {
 public:
  FractionalPoint() = default;
  explicit FractionalPoint(std::size_t n) : coords_(n, 0.0) {}
  explicit FractionalPoint(std::vector<double> coords);
  static FractionalPoint indicator(const ElementSet& s);

  std::size_t size() const { return coords_.size(); }
  double operator[](Index e) const { return coords_[e]; }
  void set(Index e, double v);
  const std::vector<double>& coords() const { return coords_; }

  double cost(const CostFunction& c) const;
  ElementSet support() const;
  bool is_integral() const;

 private:
  std::vector<double> coords_;
};

// F(x) by enumerating all 2^n subsets. Throws CapacityError when n > 20.
double mle_exact(const SubmodularOracle& f, const FractionalPoint& x);
double mle_exact_serial(const SubmodularOracle& f, const FractionalPoint& x);

// f(S) for every S, indexed by bitmask. Throws CapacityError when n > 20.
std::vector<double> value_table(const SubmodularOracle& f);
// Σ_S table[S] Pr[R = S] for R ~ x.
double mle_from_table(const std::vector<double>& table, const FractionalPoint& x);

// Pr[R = S] for every bitmask S, R ~ x. Requires n <= 20.
std::vector<double> subset_probabilities(const FractionalPoint& x);

// w_e = (1 - x_e) ∂F/∂x_e = Σ_{S ∌ e} Pr[R = S] (f(S + e) - f(S)), from a value table.
std::vector<double> weighted_gradient_exact(const std::vector<double>& table,
                                            const FractionalPoint& x);
std::vector<double> weighted_gradient_exact_serial(const std::vector<double>& table,
                                                   const FractionalPoint& x);

// The same quantity estimated from `samples` draws R ~ x.
std::vector<double> weighted_gradient_sampled(const SubmodularOracle& f, const FractionalPoint& x,
                                              std::size_t samples, RngStream& rng);

struct MleEstimate {
  double value = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  double delta = 0.0;
};

// ceil(ln(2/δ) range² / (2t²)), at least 1.
std::size_t hoeffding_samples(double range, double t, double delta);

// Sample mean of f(R) over hoeffding_samples(f(N), t, δ) draws R ~ x. Consumes one draw of
// `rng`; the samples themselves come from fixed child streams, so the value does not depend
// on the thread count and the serial variant returns the identical number.
MleEstimate mle_estimate(const SubmodularOracle& f, const FractionalPoint& x, double t,
                         double delta, RngStream& rng);
MleEstimate mle_estimate_serial(const SubmodularOracle& f, const FractionalPoint& x, double t,
                                double delta, RngStream& rng);

// Includes each element independently with probability x_e.
ElementSet independent_round(const FractionalPoint& x, RngStream& rng);

}  // namespace mcover
