#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "mcover/brute_force.hpp"
#include "mcover/fractional.hpp"
#include "mcover/generators.hpp"
#include "mcover/lp_simplex.hpp"
#include "test_support.hpp"

using namespace mcover;
using mcover::testing::draw_size;

namespace {

// Universe {u1,u2,u3}; S1={u1,u2} cost 2, S2={u2,u3} cost 2, S3={u3} cost 1;
// row 1 is 1 on {u1,u2} with b1 = 2, row 2 is 1 on {u3} with b2 = 1.
CcfInstance e1() {
  return make_ccf(3, {{2, {0, 1}}, {2, {1, 2}}, {1, {2}}}, {{1, 1, 0}, {0, 0, 1}}, {2, 1});
}

bool row_holds(const LpRow& row, const std::vector<double>& x, double tol) {
  double lhs = 0.0;
  for (const auto& [v, a] : row.coeffs) lhs += a * x[v];
  if (row.sense != Sense::le && lhs < row.rhs - tol) return false;
  if (row.sense != Sense::ge && lhs > row.rhs + tol) return false;
  return true;
}

}  // namespace

TEST(SolveLp, BoundedSingleVariable) {
  LPModel m;
  const Index x = m.add_variable(1.0, 0.0, kInf, "x");
  m.add_row({{x, 1.0}}, Sense::ge, 3.0);
  m.add_row({{x, 1.0}}, Sense::le, 10.0);
  const auto sol = solve_lp(m);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.x[0], 3.0, 1e-9);
  EXPECT_NEAR(sol.objective, 3.0, 1e-9);
}

TEST(SolveLp, DetectsInfeasibility) {
  LPModel m;
  const Index x = m.add_variable(0.0, 0.0, kInf);
  m.add_row({{x, 1.0}}, Sense::ge, 1.0);
  m.add_row({{x, 1.0}}, Sense::le, 0.0);
  EXPECT_EQ(solve_lp(m).status, LpStatus::infeasible);
}

TEST(SolveLp, DetectsUnboundedness) {
  LPModel m;
  const Index x = m.add_variable(-1.0, 0.0, kInf);
  m.add_row({{x, 1.0}}, Sense::ge, 1.0);
  EXPECT_EQ(solve_lp(m).status, LpStatus::unbounded);
}

TEST(SolveLp, RejectsMalformedModels) {
  LPModel m;
  m.add_variable(1.0, 2.0, 1.0);
  EXPECT_THROW(m.validate(), std::invalid_argument);
  LPModel n;
  n.add_variable(NAN, 0.0, 1.0);
  EXPECT_THROW(n.validate(), std::invalid_argument);
}

TEST(SolveLp, PrimalFeasibleAndDualObjectiveMatches) {
  const RngStream root(41);
  for (std::uint64_t t = 0; t < 60; ++t) {
    RngStream rng = root.split(t);
    const std::size_t nv = draw_size(rng, 1, 6), nr = draw_size(rng, 1, 6);
    LPModel m;
    for (std::size_t v = 0; v < nv; ++v) m.add_variable(rng.uniform(0.0, 5.0), 0.0, rng.uniform(1.0, 4.0));
    for (std::size_t r = 0; r < nr; ++r) {
      std::vector<std::pair<Index, double>> coeffs;
      for (std::size_t v = 0; v < nv; ++v) {
        if (rng.bernoulli(0.6)) coeffs.emplace_back(v, rng.uniform(-1.0, 3.0));
      }
      const Sense s = rng.bernoulli(0.7) ? Sense::ge : (rng.bernoulli(0.5) ? Sense::le : Sense::eq);
      m.add_row(std::move(coeffs), s, rng.uniform(0.0, 3.0));
    }
    const auto sol = solve_lp(m);
    ASSERT_NE(sol.status, LpStatus::solver_failure) << sol.message;
    if (sol.status != LpStatus::optimal) continue;
    for (std::size_t v = 0; v < nv; ++v) {
      EXPECT_GE(sol.x[v], m.lower[v] - 1e-9);
      EXPECT_LE(sol.x[v], m.upper[v] + 1e-9);
    }
    for (const auto& row : m.rows) EXPECT_TRUE(row_holds(row, sol.x, 1e-9));
    EXPECT_NEAR(sol.objective, sol.dual_objective, 1e-6);
  }
}

TEST(BuildCcfLp, E1Shape) {
  const LPModel m = build_ccf_lp(e1());
  EXPECT_EQ(m.num_vars(), 6u);
  EXPECT_EQ(m.rows.size(), 5u);
  EXPECT_EQ(ccf_lp_point_var(e1(), 0), 3u);
}

TEST(BuildCcfLp, E1OptimumIsThree) {
  const auto sol = solve_lp(build_ccf_lp(e1()));
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_NEAR(sol.objective, 3.0, 1e-9);
}

TEST(BuildCcfLp, EmptyUniverse) {
  CcfInstance none = make_ccf(0, {{1, {}}, {2, {}}}, {{}}, {0.0});
  const auto m = build_ccf_lp(none);
  EXPECT_EQ(m.num_vars(), 2u);
  EXPECT_EQ(solve_lp(m).status, LpStatus::optimal);
  CcfInstance need = make_ccf(0, {{1, {}}}, {{}}, {1.0});
  EXPECT_EQ(solve_lp(build_ccf_lp(need)).status, LpStatus::infeasible);
}

TEST(BuildCcfLp, SingleCoveringSetBoundsTheLp) {
  CcfInstance one = make_ccf(3, {{4, {0, 1, 2}}, {3, {0}}}, {{1, 1, 1}}, {2.0});
  const auto sol = solve_lp(build_ccf_lp(one));
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_LE(sol.objective, 4.0 + 1e-9);
  EXPECT_EQ(brute_force_ccf(one).cost, 4);
}

TEST(BuildCcfLpProperty, LpIsALowerBoundOnOpt) {
  const RngStream root(42);
  for (std::uint64_t t = 0; t < 80; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 1, 12);
    p.points = draw_size(rng, 1, 10);
    p.r = draw_size(rng, 1, 3);
    const CcfInstance inst = random_ccf(p, rng);
    const auto bf = brute_force_ccf(inst);
    const auto sol = solve_lp(build_ccf_lp(inst));
    ASSERT_TRUE(bf.feasible);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_LE(sol.objective, static_cast<double>(bf.cost) + 1e-7);
    EXPECT_NEAR(sol.objective, sol.dual_objective, 1e-6);
  }
}

TEST(MscRelax, ZeroRequirementsGiveZeroPoint) {
  auto f = make_modular({1.0, 1.0});
  MscInstance inst = make_msc(CostFunction({1, 1}), {{f, 0.0}});
  RngStream rng(1);
  const auto res = solve_msc_relax(inst, 0.0, 0.2, rng);
  ASSERT_EQ(res.status, RelaxStatus::feasible_point);
  EXPECT_EQ(res.x.coords(), std::vector<double>(2, 0.0));
}

TEST(MscRelax, ZeroBudgetWithDemandIsInfeasible) {
  auto f = make_modular({1.0, 1.0});
  MscInstance inst = make_msc(CostFunction({1, 1}), {{f, 1.0}});
  RngStream rng(1);
  EXPECT_EQ(solve_msc_relax(inst, 0.0, 0.2, rng).status, RelaxStatus::reported_infeasible);
}

TEST(MscRelax, ModularCheapestKBudget) {
  const std::vector<Cost> costs{5, 1, 4, 2, 3, 6};
  const double eps = 0.2;
  for (std::size_t k = 1; k <= 4; ++k) {
    auto f = make_modular(std::vector<double>(costs.size(), 1.0));
    MscInstance inst = make_msc(CostFunction(costs), {{f, static_cast<double>(k)}});
    std::vector<Cost> sorted = costs;
    std::sort(sorted.begin(), sorted.end());
    const Cost budget = std::accumulate(sorted.begin(), sorted.begin() + static_cast<long>(k), Cost{0});
    RngStream rng(k);
    const auto res = solve_msc_relax(normalized(inst), static_cast<double>(budget), eps, rng);
    ASSERT_EQ(res.status, RelaxStatus::feasible_point) << res.reason;
    EXPECT_LE(res.cost, static_cast<double>(budget) + 1e-9);
    EXPECT_GE(mle_exact(*f, res.x), (1.0 - 1.0 / std::exp(1.0) - eps) * static_cast<double>(k) - 1e-9);
  }
}

TEST(MscRelaxProperty, FeasiblePointsHonorTheContract) {
  const RngStream root(43);
  const double eps = 0.25;
  for (std::uint64_t t = 0; t < 30; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 3, 9);
    const MscInstance inst = normalized(random_coverage_msc(p, rng));
    const auto opt = brute_force_msc(inst);
    ASSERT_TRUE(opt.feasible);
    RngStream r = rng.split(1);
    const auto res = solve_msc_relax(inst, static_cast<double>(opt.cost), eps, r);
    ASSERT_EQ(res.status, RelaxStatus::feasible_point) << res.reason;
    EXPECT_LE(res.x.cost(inst.costs), static_cast<double>(opt.cost) + 1e-9);
    for (std::size_t i = 0; i < inst.r(); ++i) {
      const double b = inst.constraints[i].requirement;
      EXPECT_GE(res.bounds[i], (1.0 - 1.0 / std::exp(1.0) - eps) * b - 1e-9);
      EXPECT_GE(mle_exact(*inst.constraints[i].f, res.x), res.bounds[i] - 1e-9);
    }
    // Feasible at C stays feasible at a larger budget.
    RngStream r2 = rng.split(1);
    EXPECT_EQ(solve_msc_relax(inst, 2.0 * static_cast<double>(opt.cost), eps, r2).status,
              RelaxStatus::feasible_point);
  }
}
