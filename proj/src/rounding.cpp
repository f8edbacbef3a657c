#include "mcover/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mcover {

double lipschitz_ell(std::size_t r, double eps) {
  if (r < 1) throw std::domain_error("lipschitz_ell: r must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("lipschitz_ell: eps must be in (0,1)");
  const double ratio = static_cast<double>(r) / eps;
  if (!(ratio > 1.0)) throw std::domain_error("lipschitz_ell: r/eps must exceed 1");
  return eps * eps / (2.0 * std::log(ratio));
}

std::size_t greedy_size_bound(double ell, double eps) {
  if (!(ell > 0.0 && ell < 1.0)) throw std::domain_error("greedy_size_bound: ell must be in (0,1)");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("greedy_size_bound: eps must be in (0,1)");
  return static_cast<std::size_t>(std::ceil(std::log(1.0 / eps) / ell));
}

const char* to_string(GreedyStop stop) {
  return stop == GreedyStop::coverage_met ? "coverage_met" : "marginals_small";
}

namespace {

LipschitzGreedyResult run_greedy(const SubmodularOracle& f, double b, double eps, double ell,
                                 const ElementSet* candidates) {
  if (!(b >= 0.0)) throw std::invalid_argument("lipschitz_greedy: requirement must be >= 0");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("lipschitz_greedy: eps in (0,1)");
  if (!(ell > 0.0 && ell < 1.0)) throw std::invalid_argument("lipschitz_greedy: ell in (0,1)");
  const std::size_t n = f.ground_size();
  if (candidates != nullptr && candidates->universe() != n) {
    throw std::domain_error("lipschitz_greedy: candidate set over the wrong ground");
  }

  LipschitzGreedyResult res;
  res.selected = ElementSet(n);
  double value = eval(f, res.selected);
  res.trace.push_back(value);
  // Slack for the (1-ε)b comparison so that float error cannot cost an extra step.
  const double target = (1.0 - eps) * b - 1e-12 * std::max(1.0, b);

  while (value < target) {
    const double threshold = ell * (b - value);
    double best_gain = -1.0;
    Index best = n;
    ElementSet probe = res.selected;
    for (Index e = 0; e < n; ++e) {
      if (res.selected.contains(e)) continue;
      if (candidates != nullptr && !candidates->contains(e)) continue;
      probe.insert(e);
      const double gain = f.value(probe) - value;
      probe.erase(e);
      if (gain > best_gain) {
        best_gain = gain;
        best = e;
      }
    }
    if (best == n || best_gain < threshold || best_gain <= 0.0) {
      res.stop = GreedyStop::marginals_small;
      return res;
    }
    res.selected.insert(best);
    value = f.value(res.selected);
    res.trace.push_back(value);
    ++res.iterations;
  }
  res.stop = GreedyStop::coverage_met;
  return res;
}

}  // namespace

LipschitzGreedyResult lipschitz_greedy(const SubmodularOracle& f, double b, double eps,
                                       double ell) {
  return run_greedy(f, b, eps, ell, nullptr);
}

LipschitzGreedyResult lipschitz_greedy(const SubmodularOracle& f, double b, double eps,
                                       double ell, const ElementSet& candidates) {
  return run_greedy(f, b, eps, ell, &candidates);
}

RoundingOutcome round_fractional(const MscInstance& inst, const FractionalPoint& x, double eps,
                                 RngStream& rng, const RoundingOptions& options) {
  if (x.size() != inst.n) throw std::domain_error("round_fractional: point over the wrong ground");
  const std::size_t r = inst.r();
  RoundingOutcome out;
  out.ell = lipschitz_ell(r, eps);

  if (options.check_precondition) {
    out.precondition_checked = true;
    out.precondition_exact = inst.n <= kMaxExactMle;
    out.precondition_holds = true;
    RngStream check_rng = rng.split(0x5052);
    for (const auto& c : inst.constraints) {
      double v = 0.0;
      if (out.precondition_exact) {
        v = mle_exact(*c.f, x);
      } else {
        const double tol = options.estimate_rel_tol * std::max(1.0, c.requirement);
        v = mle_estimate(*c.f, x, tol, options.estimate_delta, check_rng).value;
      }
      out.precondition_values.push_back(v);
      if (v < c.requirement - kCoverTol) out.precondition_holds = false;
    }
  }

  out.greedy.resize(r);
#pragma omp parallel for schedule(dynamic, 1) if (r > 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(r); ++i) {
    const auto& c = inst.constraints[static_cast<std::size_t>(i)];
    out.greedy[static_cast<std::size_t>(i)] =
        options.greedy_candidates != nullptr
            ? lipschitz_greedy(*c.f, c.requirement, eps, out.ell, *options.greedy_candidates)
            : lipschitz_greedy(*c.f, c.requirement, eps, out.ell);
  }

  out.preselected = ElementSet(inst.n);
  for (const auto& g : out.greedy) out.preselected.unite(g.selected);
  out.sampled = independent_round(x, rng);
  out.final_set = set_union(out.preselected, out.sampled);

  out.values = inst.values(out.final_set);
  for (std::size_t i = 0; i < r; ++i) {
    out.met.push_back(out.values[i] >= (1.0 - eps) * inst.constraints[i].requirement - kCoverTol);
  }
  out.greedy_cost = inst.cost(out.preselected);
  out.sampled_cost = inst.cost(out.sampled);
  out.total_cost = inst.cost(out.final_set);
  return out;
}

}  // namespace mcover
