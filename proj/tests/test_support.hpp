#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mcover/element_set.hpp"
#include "mcover/extension.hpp"
#include "mcover/rng.hpp"
#include "mcover/submodular.hpp"

namespace mcover::testing {

inline std::size_t draw_size(RngStream& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

// Random weighted coverage function with integer weights in [1, 5].
inline std::shared_ptr<WeightedCoverageFunction> random_coverage(std::size_t n, std::size_t points,
                                                                 double density, RngStream& rng) {
  std::vector<std::vector<Index>> covers(n);
  for (auto& c : covers) {
    for (Index j = 0; j < points; ++j) {
      if (rng.bernoulli(density)) c.push_back(j);
    }
  }
  std::vector<double> w(points);
  for (auto& v : w) v = 1.0 + static_cast<double>(rng.below(5));
  return std::make_shared<WeightedCoverageFunction>(std::move(covers), std::move(w));
}

inline ElementSet random_subset(std::size_t n, double p, RngStream& rng) {
  ElementSet s(n);
  for (Index e = 0; e < n; ++e) {
    if (rng.bernoulli(p)) s.insert(e);
  }
  return s;
}

// Coordinates hit 0 and 1 exactly some of the time.
inline FractionalPoint random_point(std::size_t n, RngStream& rng) {
  std::vector<double> x(n);
  for (auto& v : x) {
    const double u = rng.uniform();
    v = u < 0.15 ? 0.0 : (u > 0.9 ? 1.0 : rng.uniform());
  }
  return FractionalPoint(std::move(x));
}

}  // namespace mcover::testing
