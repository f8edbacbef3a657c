#include "mcover/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mcover {

LPModel build_ccf_lp(const CcfInstance& inst) {
  LPModel model;
  for (std::size_t i = 0; i < inst.m(); ++i) {
    model.add_variable(static_cast<double>(inst.sets[i].cost), 0.0, 1.0, "x" + std::to_string(i));
  }
  for (std::size_t j = 0; j < inst.universe_size; ++j) {
    model.add_variable(0.0, 0.0, 1.0, "z" + std::to_string(j));
  }
  std::vector<std::vector<Index>> containing(inst.universe_size);
  for (std::size_t i = 0; i < inst.m(); ++i) {
    for (Index p : inst.sets[i].points) containing[p].push_back(i);
  }
  for (std::size_t j = 0; j < inst.universe_size; ++j) {
    std::vector<std::pair<Index, double>> coeffs;
    for (Index i : containing[j]) coeffs.emplace_back(ccf_lp_set_var(inst, i), 1.0);
    coeffs.emplace_back(ccf_lp_point_var(inst, j), -1.0);
    model.add_row(std::move(coeffs), Sense::ge, 0.0, "cover" + std::to_string(j));
  }
  for (std::size_t k = 0; k < inst.r(); ++k) {
    std::vector<std::pair<Index, double>> coeffs;
    for (std::size_t j = 0; j < inst.universe_size; ++j) {
      if (inst.matrix[k][j] != 0.0) coeffs.emplace_back(ccf_lp_point_var(inst, j), inst.matrix[k][j]);
    }
    model.add_row(std::move(coeffs), Sense::ge, inst.requirements[k], "color" + std::to_string(k));
  }
  return model;
}

const char* to_string(RelaxStatus status) {
  return status == RelaxStatus::feasible_point ? "feasible_point" : "reported_infeasible";
}

namespace {

double sample_mean(const SubmodularOracle& f, const FractionalPoint& x, std::size_t samples,
                   RngStream& rng) {
  double total = 0.0;
  for (std::size_t k = 0; k < samples; ++k) total += f.value(independent_round(x, rng));
  return total / static_cast<double>(samples);
}

// max u·v s.t. c·v <= budget, v ∈ [0,1]^n. Zero-cost elements with positive weight are
// always taken; the rest by decreasing u_e / c_e, ties to the lowest index.
double fractional_knapsack(const std::vector<double>& u, const CostFunction& costs, double budget,
                           std::vector<double>& v) {
  const std::size_t n = u.size();
  v.assign(n, 0.0);
  std::vector<Index> order;
  double value = 0.0;
  for (Index e = 0; e < n; ++e) {
    if (u[e] <= 0.0) continue;
    if (costs[e] == 0) {
      v[e] = 1.0;
      value += u[e];
    } else {
      order.push_back(e);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return u[a] * static_cast<double>(costs[b]) > u[b] * static_cast<double>(costs[a]);
  });
  double left = budget;
  for (Index e : order) {
    if (left <= 0.0) break;
    const double c = static_cast<double>(costs[e]);
    const double take = std::min(1.0, left / c);
    v[e] = take;
    value += take * u[e];
    left -= take * c;
  }
  return value;
}

}  // namespace

MscRelaxResult solve_msc_relax(const MscInstance& inst, double budget, double eps, RngStream& rng,
                               const RelaxOptions& options) {
  if (!(budget >= 0.0)) throw std::invalid_argument("solve_msc_relax: budget must be >= 0");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("solve_msc_relax: eps in (0,1)");
  const std::size_t n = inst.n;
  const std::size_t r = inst.r();
  MscRelaxResult res;
  res.x = FractionalPoint(n);

  const bool use_tables = n <= options.exact_gradient_limit;
  std::vector<std::vector<double>> tables;
  if (use_tables) {
    for (const auto& c : inst.constraints) tables.push_back(value_table(*c.f));
  }
  auto value_at = [&](std::size_t i, const FractionalPoint& x) {
    return use_tables ? mle_from_table(tables[i], x)
                      : sample_mean(*inst.constraints[i].f, x, options.gradient_samples, rng);
  };

  const std::size_t steps = static_cast<std::size_t>(std::ceil(8.0 / eps));
  const double eta = eps / 4.0;
  const std::size_t max_mwu = static_cast<std::size_t>(
      std::ceil(8.0 * std::log(static_cast<double>(r) + 1.0) / (eps * eps)));
  std::vector<double> x(n, 0.0);
  std::vector<double> v, vsum(n), u(n);

  for (std::size_t step = 0; step < steps; ++step) {
    const FractionalPoint cur(x);
    std::vector<std::size_t> active;
    std::vector<double> deficit;
    for (std::size_t i = 0; i < r; ++i) {
      const double b = inst.constraints[i].requirement;
      const double d = b - value_at(i, cur);
      if (d > 1e-9 * std::max(1.0, b)) {
        active.push_back(i);
        deficit.push_back(d);
      }
    }
    if (active.empty()) break;
    ++res.steps;

    std::vector<std::vector<double>> grad;
    for (std::size_t i : active) {
      grad.push_back(use_tables
                         ? weighted_gradient_exact(tables[i], cur)
                         : weighted_gradient_sampled(*inst.constraints[i].f, cur,
                                                     options.gradient_samples, rng));
    }

    const std::size_t a = active.size();
    std::vector<double> lambda(a, 1.0 / static_cast<double>(a));
    std::fill(vsum.begin(), vsum.end(), 0.0);
    std::vector<double> cover_sum(a, 0.0);
    std::size_t rounds = 0;
    for (std::size_t k = 0; k < max_mwu; ++k) {
      std::fill(u.begin(), u.end(), 0.0);
      for (std::size_t t = 0; t < a; ++t) {
        const double scale = lambda[t] / deficit[t];
        for (std::size_t e = 0; e < n; ++e) u[e] += scale * grad[t][e];
      }
      const double oracle = fractional_knapsack(u, inst.costs, budget, v);
      ++res.mwu_iterations;
      // Any v with c·v <= C covering every deficit would score at least Σλ = 1.
      if (oracle < 1.0 - eps / 4.0) {
        res.reason = "step " + std::to_string(step) +
                     ": no direction within budget covers the weighted deficits";
        res.x = cur;
        res.cost = cur.cost(inst.costs);
        return res;
      }
      ++rounds;
      bool done = true;
      double norm = 0.0;
      for (std::size_t t = 0; t < a; ++t) {
        double cov = 0.0;
        for (std::size_t e = 0; e < n; ++e) cov += grad[t][e] * v[e];
        const double ratio = cov / deficit[t];
        cover_sum[t] += ratio;
        if (cover_sum[t] / static_cast<double>(rounds) < 1.0 - eps / 8.0) done = false;
        lambda[t] *= std::exp(-eta * (std::min(ratio, 2.0) - 1.0));
        norm += lambda[t];
      }
      for (double& l : lambda) l /= norm;
      for (std::size_t e = 0; e < n; ++e) vsum[e] += v[e];
      if (done) break;
    }
    for (std::size_t e = 0; e < n; ++e) {
      const double vbar = vsum[e] / static_cast<double>(rounds);
      x[e] = std::min(1.0, x[e] + vbar * (1.0 - x[e]) / static_cast<double>(steps));
    }
  }

  res.x = FractionalPoint(x);
  res.cost = res.x.cost(inst.costs);
  if (res.cost > budget * (1.0 + 1e-9) + 1e-9) {
    res.reason = "fractional cost exceeds the budget";
    return res;
  }
  res.exact = n <= kMaxExactMle;
  bool ok = true;
  for (std::size_t i = 0; i < r; ++i) {
    const auto& c = inst.constraints[i];
    double bound;
    if (res.exact) {
      bound = mle_exact(*c.f, res.x);
    } else {
      const double t = eps * std::max(c.requirement, 1e-9) / 4.0;
      const double delta = options.certify_delta / static_cast<double>(r);
      const MleEstimate est = mle_estimate(*c.f, res.x, t, delta, rng);
      bound = est.value - t;
      res.tolerance = std::max(res.tolerance, t);
      res.delta = options.certify_delta;
    }
    res.bounds.push_back(bound);
    if (bound < (1.0 - 1.0 / std::exp(1.0) - eps) * c.requirement - kCoverTol) ok = false;
  }
  if (ok) {
    res.status = RelaxStatus::feasible_point;
  } else {
    res.reason = "final point misses the (1 - 1/e - eps) certificate";
  }
  return res;
}

}  // namespace mcover
