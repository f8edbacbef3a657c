#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "mcover/element_set.hpp"
#include "mcover/flmo_instance.hpp"
#include "mcover/instances.hpp"
#include "mcover/rng.hpp"

namespace mcover {

struct CoverageParams {
  std::size_t n = 10;       // elements (MSC) or sets (CCF)
  std::size_t points = 12;  // points per coverage function / CCF universe size
  std::size_t r = 2;
  Cost cost_min = 1;
  Cost cost_max = 10;
  double density = 0.25;    // membership probability of a point in an element's set
  double demand = 0.6;      // requirement as a fraction of the attainable maximum
  int weight_max = 4;       // point weights are integers in [1, weight_max]
};

// r independent weighted coverage functions over a shared ground of n elements.
MscInstance random_coverage_msc(const CoverageParams& p, RngStream& rng);

// Random set system with r nonnegative integer color rows.
CcfInstance random_ccf(const CoverageParams& p, RngStream& rng);

// Points are edges of a random graph on p.n vertices; every point lies in exactly two sets.
CcfInstance vertex_cover_like(const CoverageParams& p, RngStream& rng);

// A random coverage instance whose requirements are the values of a planted set, so the
// planted set is feasible and its cost bounds OPT.
struct PlantedMsc {
  MscInstance instance;
  ElementSet planted;
  Cost planted_cost = 0;
};
PlantedMsc planted_optimum_msc(const CoverageParams& p, std::size_t planted_size, RngStream& rng);

struct FlmoParams {
  std::size_t facilities = 3;
  std::size_t clients = 6;
  std::size_t r = 2;
  double side = 10.0;        // coordinates uniform in [0, side]^2
  double open_min = 1.0;
  double open_max = 10.0;
  double color_prob = 0.5;   // probability a client joins a color class (each client joins >= 1)
  double demand = 0.6;       // b_k = max(1, round(demand |C_k|))
};

// Integer coordinates in [0, side]^2 and integer opening costs; Euclidean distances.
FlmoInstance random_metric_flmo(const FlmoParams& p, RngStream& rng);

}  // namespace mcover
