#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "mcover/generators.hpp"
#include "mcover/instances.hpp"
#include "mcover/rounding.hpp"
#include "test_support.hpp"

using namespace mcover;
using mcover::testing::draw_size;
using mcover::testing::random_coverage;
using mcover::testing::random_point;

TEST(LipschitzEll, Examples) {
  // 0.25 / (2 ln 4) = 0.0901684...; the often-quoted 0.090172 is a rounding slip.
  EXPECT_NEAR(lipschitz_ell(2, 0.5), 0.25 / (2.0 * std::log(4.0)), 1e-15);
  EXPECT_NEAR(lipschitz_ell(2, 0.5), 0.0901684, 1e-6);
  EXPECT_NEAR(lipschitz_ell(1, std::exp(-1.0)), 0.067668, 1e-6);
  EXPECT_THROW(lipschitz_ell(0, 0.5), std::domain_error);
  EXPECT_THROW(lipschitz_ell(1, 1.0), std::domain_error);
  EXPECT_THROW(lipschitz_ell(1, 0.0), std::domain_error);
}

TEST(LipschitzGreedy, ZeroRequirementSelectsNothing) {
  auto f = make_modular({1.0, 2.0});
  const auto res = lipschitz_greedy(*f, 0.0, 0.1, 0.5);
  EXPECT_TRUE(res.selected.empty());
  EXPECT_EQ(res.stop, GreedyStop::coverage_met);
}

TEST(LipschitzGreedy, SingleSufficientElement) {
  auto f = make_modular({3.0});
  const auto res = lipschitz_greedy(*f, 3.0, 0.1, 0.5);
  EXPECT_EQ(res.selected, ElementSet(1, {0}));
  EXPECT_EQ(res.stop, GreedyStop::coverage_met);
  EXPECT_EQ(res.iterations, 1u);
}

TEST(LipschitzGreedy, ZeroMarginalsStopImmediately) {
  auto f = make_modular({0.0, 0.0});
  const auto res = lipschitz_greedy(*f, 1.0, 0.1, 0.5);
  EXPECT_TRUE(res.selected.empty());
  EXPECT_EQ(res.stop, GreedyStop::marginals_small);
  EXPECT_STREQ(to_string(res.stop), "marginals_small");
}

TEST(LipschitzGreedy, TiesGoToLowestIndex) {
  auto f = make_modular({2.0, 2.0, 2.0});
  const auto res = lipschitz_greedy(*f, 2.0, 0.1, 0.5);
  EXPECT_EQ(res.selected, ElementSet(3, {0}));
}

TEST(LipschitzGreedyProperty, SizeBoundTagAndInductiveTrace) {
  const RngStream root(31);
  const double eps_choices[] = {0.1, 0.25, 0.5};
  for (std::uint64_t t = 0; t < 300; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 1, 14);
    auto f = random_coverage(n, draw_size(rng, 1, 12), 0.3, rng);
    const double top = eval(*f, ElementSet::full(n));
    const double b = std::floor(top * rng.uniform(0.1, 1.2));
    const double eps = eps_choices[rng.below(3)];
    const double ell = lipschitz_ell(draw_size(rng, 1, 3), eps);
    const auto res = lipschitz_greedy(*f, b, eps, ell);
    ASSERT_LE(res.selected.size(), greedy_size_bound(ell, eps));
    ASSERT_EQ(res.trace.size(), res.iterations + 1);
    const double fs = eval(*f, res.selected);
    if (res.stop == GreedyStop::coverage_met) {
      EXPECT_GE(fs, (1.0 - eps) * b - kCoverTol);
      for (std::size_t k = 0; k < res.trace.size(); ++k) {
        EXPECT_GE(res.trace[k], (1.0 - std::pow(1.0 - ell, static_cast<double>(k))) * b - 1e-9);
      }
    } else {
      EXPECT_LT(fs, (1.0 - eps) * b);
      for (Index e = 0; e < n; ++e) EXPECT_LT(marginal(*f, e, res.selected), ell * (b - fs));
    }
  }
}

TEST(RoundFractional, IntegralPointMeetsEveryConstraint) {
  RngStream gen(32);
  auto f1 = random_coverage(6, 8, 0.4, gen);
  auto f2 = random_coverage(6, 8, 0.4, gen);
  const ElementSet s(6, {0, 2, 5});
  MscInstance inst = make_msc(CostFunction({1, 2, 3, 4, 5, 6}), {{f1, eval(*f1, s)}, {f2, eval(*f2, s)}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed);
    const auto out = round_fractional(inst, FractionalPoint::indicator(s), 0.2, rng);
    EXPECT_TRUE(s.is_subset_of(out.final_set));
    EXPECT_TRUE(out.met[0] && out.met[1]);
    EXPECT_TRUE(out.precondition_holds);
  }
}

TEST(RoundFractional, ZeroRequirementsOnlySample) {
  RngStream gen(33);
  auto f = random_coverage(5, 6, 0.4, gen);
  MscInstance inst = make_msc(CostFunction({1, 1, 1, 1, 1}), {{f, 0.0}});
  RngStream rng(1);
  const auto out = round_fractional(inst, FractionalPoint(std::vector<double>(5, 0.5)), 0.2, rng);
  EXPECT_TRUE(out.preselected.empty());
  EXPECT_EQ(out.final_set, out.sampled);
}

TEST(RoundFractional, FinalIsUnionAndCostsAdd) {
  const RngStream root(34);
  for (std::uint64_t t = 0; t < 50; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 3, 10);
    MscInstance inst = random_coverage_msc(p, rng);
    const FractionalPoint x = random_point(p.n, rng);
    RngStream r = rng.split(1);
    const auto out = round_fractional(inst, x, 0.25, r, {.check_precondition = false});
    ElementSet u = out.preselected;
    u.unite(out.sampled);
    EXPECT_EQ(out.final_set, u);
    EXPECT_EQ(out.total_cost, inst.cost(out.final_set));
    EXPECT_EQ(out.greedy_cost, inst.cost(out.preselected));
    const std::size_t bound = greedy_size_bound(out.ell, 0.25);
    EXPECT_LE(out.greedy_cost, static_cast<Cost>(inst.r() * bound) * inst.costs.declared_max());
    // f(∪S_i ∪ S') = f(∪S_i) + f(S' | ∪S_i).
    for (const auto& c : inst.constraints) {
      const double lhs = eval(*c.f, out.final_set);
      ResidualFunction rest(c.f, out.preselected);
      EXPECT_NEAR(lhs, eval(*c.f, out.preselected) + eval(rest, out.sampled), 1e-9);
    }
  }
}

TEST(RoundFractionalStatistics, SampledCostMatchesFractionalCost) {
  RngStream gen(35);
  CoverageParams p;
  p.n = 10;
  MscInstance inst = random_coverage_msc(p, gen);
  const FractionalPoint x = random_point(p.n, gen);
  const int trials = 4000;
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < trials; ++s) {
    RngStream r(static_cast<std::uint64_t>(s));
    const auto out = round_fractional(inst, x, 0.25, r, {.check_precondition = false});
    const double c = static_cast<double>(out.sampled_cost);
    sum += c;
    sq += c * c;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sq / trials - mean * mean) / trials);
  EXPECT_NEAR(mean, x.cost(inst.costs), 3.0 * se + 1e-9);
}

// Contract with r = 1: f(S) >= (1-ε) b fails with probability at most ε.
TEST(RoundFractionalStatistics, SingleConstraintMissRate) {
  const double eps = 0.2;
  const int trials = 2000;
  int miss = 0;
  const RngStream root(36);
  for (int s = 0; s < trials; ++s) {
    RngStream rng = root.split(static_cast<std::uint64_t>(s));
    const std::size_t n = draw_size(rng, 4, 12);
    auto f = random_coverage(n, 10, 0.25, rng);
    const FractionalPoint x = random_point(n, rng);
    const double b = mle_exact(*f, x);
    MscInstance inst = make_msc(CostFunction(std::vector<Cost>(n, 1)), {{f, b}});
    RngStream r = rng.split(1);
    const auto out = round_fractional(inst, x, eps, r);
    ASSERT_TRUE(out.precondition_holds && out.precondition_exact);
    if (!out.met[0]) ++miss;
  }
  const double se = std::sqrt(eps * (1 - eps) / trials);
  EXPECT_LE(static_cast<double>(miss) / trials, eps + 3 * se);
}
