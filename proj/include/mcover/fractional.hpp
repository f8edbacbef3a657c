#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcover/extension.hpp"
#include "mcover/instances.hpp"
#include "mcover/lp_simplex.hpp"
#include "mcover/rng.hpp"

namespace mcover {

// Variables x_0..x_{m-1} (sets), then z_0..z_{n-1} (points), all in [0,1].
// Rows: Σ_{i: j ∈ S_i} x_i - z_j >= 0 for every point j, then A z >= b. Objective Σ c_i x_i.
LPModel build_ccf_lp(const CcfInstance& inst);

inline Index ccf_lp_set_var(const CcfInstance&, Index i) { return i; }
inline Index ccf_lp_point_var(const CcfInstance& inst, Index j) { return inst.m() + j; }

enum class RelaxStatus { feasible_point, reported_infeasible };

const char* to_string(RelaxStatus status);

struct RelaxOptions {
  // Gradients and values come from a full value table up to this ground size.
  std::size_t exact_gradient_limit = 14;
  std::size_t gradient_samples = 400;
  // Failure budget for sampled certification when n exceeds the exact-enumeration bound.
  double certify_delta = 0.01;
};

struct MscRelaxResult {
  RelaxStatus status = RelaxStatus::reported_infeasible;
  FractionalPoint x;
  double cost = 0.0;
  // Certified lower bounds on F_i(x); exact values when `exact`, else estimate - tolerance.
  std::vector<double> bounds;
  bool exact = true;
  double tolerance = 0.0;
  double delta = 0.0;
  std::size_t steps = 0;
  std::size_t mwu_iterations = 0;
  std::string reason;
};

// Measured continuous greedy: T = ceil(8/ε) steps, each moving x by v∘(1-x)/T where v
// solves the linearized covering system {c·v <= C, w_i·v >= b_i - F_i(x)} by multiplicative
// weights over the constraints. A step whose weighted knapsack optimum falls short of the
// MWU certificate reports infeasibility. The final point is certified against
// F_i(x) >= (1 - 1/e - ε) b_i.
MscRelaxResult solve_msc_relax(const MscInstance& inst, double budget, double eps, RngStream& rng,
                               const RelaxOptions& options = {});

}  // namespace mcover
