#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "mcover/element_set.hpp"

namespace mcover {

// Facility location with multiple outliers. Points 0..F-1 are facilities, F..F+C-1 clients.
struct FlmoInstance {
  std::size_t num_facilities = 0;
  std::size_t num_clients = 0;
  std::vector<double> opening;                 // f_i
  std::vector<std::vector<double>> distance;   // (F+C) x (F+C)
  std::vector<std::vector<Index>> colors;      // C_k as client indices
  std::vector<std::size_t> requirements;       // b_k
  std::vector<std::array<double, 2>> coords;   // optional, F+C entries when present

  std::size_t r() const { return colors.size(); }
  double d(Index facility, Index client) const { return distance[facility][num_facilities + client]; }

  // Throws std::invalid_argument on malformed data or a metric violation beyond 1e-9 relative.
  void validate() const;
};

FlmoInstance make_flmo_from_coords(std::vector<std::array<double, 2>> facility_coords,
                                   std::vector<std::array<double, 2>> client_coords,
                                   std::vector<double> opening,
                                   std::vector<std::vector<Index>> colors,
                                   std::vector<std::size_t> requirements);

FlmoInstance make_flmo_from_matrix(std::size_t num_facilities, std::size_t num_clients,
                                   std::vector<std::vector<double>> distance,
                                   std::vector<double> opening,
                                   std::vector<std::vector<Index>> colors,
                                   std::vector<std::size_t> requirements);

struct FlmoSolution {
  ElementSet open;                                // facilities
  std::vector<std::optional<Index>> assignment;   // client -> facility, or unserved
};

double flmo_cost(const FlmoInstance& inst, const FlmoSolution& sol);
// Served clients per color.
std::vector<std::size_t> flmo_served(const FlmoInstance& inst, const FlmoSolution& sol);
// Every assignment goes to an open facility and every color meets b_k.
bool flmo_feasible(const FlmoInstance& inst, const FlmoSolution& sol);

}  // namespace mcover
