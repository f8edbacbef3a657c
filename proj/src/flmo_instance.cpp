#include "mcover/flmo_instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcover {

void FlmoInstance::validate() const {
  const std::size_t total = num_facilities + num_clients;
  if (opening.size() != num_facilities) throw std::invalid_argument("opening cost count");
  for (double f : opening) {
    if (!std::isfinite(f) || f < 0.0) throw std::invalid_argument("opening costs must be >= 0");
  }
  if (distance.size() != total) throw std::invalid_argument("distance matrix row count");
  for (const auto& row : distance) {
    if (row.size() != total) throw std::invalid_argument("distance matrix is not square");
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("distances must be >= 0");
    }
  }
  for (std::size_t u = 0; u < total; ++u) {
    if (distance[u][u] != 0.0) throw std::invalid_argument("d(u,u) must be 0");
    for (std::size_t v = u + 1; v < total; ++v) {
      if (std::abs(distance[u][v] - distance[v][u]) > 1e-9 * std::max(1.0, distance[u][v])) {
        throw std::invalid_argument("distance matrix is not symmetric");
      }
    }
  }
  for (std::size_t u = 0; u < total; ++u) {
    for (std::size_t v = 0; v < total; ++v) {
      for (std::size_t w = 0; w < total; ++w) {
        const double lhs = distance[u][w];
        const double rhs = distance[u][v] + distance[v][w];
        if (lhs > rhs + 1e-9 * std::max(1.0, rhs)) {
          throw std::invalid_argument("triangle inequality violated at (" + std::to_string(u) +
                                      "," + std::to_string(v) + "," + std::to_string(w) + ")");
        }
      }
    }
  }
  if (requirements.size() != colors.size()) throw std::invalid_argument("requirement count");
  for (std::size_t k = 0; k < colors.size(); ++k) {
    for (Index j : colors[k]) {
      if (j >= num_clients) throw std::invalid_argument("color references an unknown client");
    }
    if (requirements[k] > colors[k].size()) {
      throw std::invalid_argument("requirement of color " + std::to_string(k) +
                                  " exceeds its class size");
    }
  }
  if (!coords.empty() && coords.size() != total) throw std::invalid_argument("coordinate count");
}

FlmoInstance make_flmo_from_coords(std::vector<std::array<double, 2>> facility_coords,
                                   std::vector<std::array<double, 2>> client_coords,
                                   std::vector<double> opening,
                                   std::vector<std::vector<Index>> colors,
                                   std::vector<std::size_t> requirements) {
  FlmoInstance inst;
  inst.num_facilities = facility_coords.size();
  inst.num_clients = client_coords.size();
  inst.coords = std::move(facility_coords);
  inst.coords.insert(inst.coords.end(), client_coords.begin(), client_coords.end());
  const std::size_t total = inst.coords.size();
  inst.distance.assign(total, std::vector<double>(total, 0.0));
  for (std::size_t u = 0; u < total; ++u) {
    for (std::size_t v = u + 1; v < total; ++v) {
      const double dx = inst.coords[u][0] - inst.coords[v][0];
      const double dy = inst.coords[u][1] - inst.coords[v][1];
      inst.distance[u][v] = inst.distance[v][u] = std::sqrt(dx * dx + dy * dy);
    }
  }
  inst.opening = std::move(opening);
  inst.colors = std::move(colors);
  for (auto& c : inst.colors) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  inst.requirements = std::move(requirements);
  inst.validate();
  return inst;
}

FlmoInstance make_flmo_from_matrix(std::size_t num_facilities, std::size_t num_clients,
                                   std::vector<std::vector<double>> distance,
                                   std::vector<double> opening,
                                   std::vector<std::vector<Index>> colors,
                                   std::vector<std::size_t> requirements) {
  FlmoInstance inst;
  inst.num_facilities = num_facilities;
  inst.num_clients = num_clients;
  inst.distance = std::move(distance);
  inst.opening = std::move(opening);
  inst.colors = std::move(colors);
  for (auto& c : inst.colors) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  inst.requirements = std::move(requirements);
  inst.validate();
  return inst;
}

double flmo_cost(const FlmoInstance& inst, const FlmoSolution& sol) {
  double total = 0.0;
  sol.open.for_each([&](Index i) { total += inst.opening[i]; });
  for (std::size_t j = 0; j < sol.assignment.size(); ++j) {
    if (sol.assignment[j]) total += inst.d(*sol.assignment[j], j);
  }
  return total;
}

std::vector<std::size_t> flmo_served(const FlmoInstance& inst, const FlmoSolution& sol) {
  std::vector<std::size_t> served(inst.r(), 0);
  for (std::size_t k = 0; k < inst.r(); ++k) {
    for (Index j : inst.colors[k]) {
      if (j < sol.assignment.size() && sol.assignment[j]) ++served[k];
    }
  }
  return served;
}

bool flmo_feasible(const FlmoInstance& inst, const FlmoSolution& sol) {
  if (sol.assignment.size() != inst.num_clients) return false;
  if (sol.open.universe() != inst.num_facilities) return false;
  for (const auto& a : sol.assignment) {
    if (a && (*a >= inst.num_facilities || !sol.open.contains(*a))) return false;
  }
  const auto served = flmo_served(inst, sol);
  for (std::size_t k = 0; k < inst.r(); ++k) {
    if (served[k] < inst.requirements[k]) return false;
  }
  return true;
}

}  // namespace mcover
