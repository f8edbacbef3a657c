#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mcover/element_set.hpp"

namespace mcover {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { le, ge, eq };

struct LpRow {
  std::vector<std::pair<Index, double>> coeffs;
  Sense sense = Sense::ge;
  double rhs = 0.0;
  std::string name;
};

// min c·x subject to the rows and lo <= x <= hi. Lower bounds must be finite.
struct LPModel {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<LpRow> rows;

  std::size_t num_vars() const { return objective.size(); }
  Index add_variable(double cost, double lo, double hi, std::string name = {});
  void add_row(std::vector<std::pair<Index, double>> coeffs, Sense sense, double rhs,
               std::string name = {});
  // Throws std::invalid_argument on non-finite data, lo > hi or an infinite lower bound.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, solver_failure };

const char* to_string(LpStatus status);

struct LPSolution {
  LpStatus status = LpStatus::solver_failure;
  std::vector<double> x;
  std::vector<double> duals;          // one per row, sign convention of min c·x
  std::vector<double> reduced_costs;  // c - Aᵀy per variable
  double objective = 0.0;
  double dual_objective = 0.0;
  std::size_t iterations = 0;
  std::string message;
};

class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual LPSolution solve(const LPModel& model) const = 0;
  virtual std::string name() const = 0;
};

struct SimplexOptions {
  std::size_t max_iterations = 200000;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-7;
};

// Dense tableau, bounded variables, two phases with one artificial per row, Bland's rule.
class DenseSimplex final : public LpBackend {
 public:
  explicit DenseSimplex(SimplexOptions options = {}) : options_(options) {}
  LPSolution solve(const LPModel& model) const override;
  std::string name() const override { return "dense-simplex-bland"; }

 private:
  SimplexOptions options_;
};

LPSolution solve_lp(const LPModel& model);
LPSolution solve_lp(const LPModel& model, const LpBackend& backend);

// Plain-text dump in the style of the CPLEX LP format, for debugging.
std::string to_lp_format(const LPModel& model);

}  // namespace mcover
