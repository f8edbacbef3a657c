#include <gtest/gtest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "mcover/brute_force.hpp"
#include "mcover/errors.hpp"
#include "mcover/generators.hpp"
#include "mcover/msc_solver.hpp"
#include "test_support.hpp"

using namespace mcover;
using mcover::testing::draw_size;
using mcover::testing::random_coverage;

namespace {

// a -> {x}, b -> {x, y}, c -> {y}; unit weights; costs 1/2/3.
MscInstance abc(double b) {
  auto f = std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{0}, {0, 1}, {1}},
                                                      std::vector<double>{1.0, 1.0});
  return make_msc(CostFunction({1, 2, 3}), {{f, b}});
}

GuessConfig oracle(std::size_t L) {
  GuessConfig cfg;
  cfg.mode = GuessMode::oracle_assisted;
  cfg.L_override = L;
  return cfg;
}

}  // namespace

TEST(TheoreticalL, Examples) {
  EXPECT_EQ(theoretical_L(2, 0.5), 32u);
  EXPECT_EQ(theoretical_L(1, 0.5), 8u);
  EXPECT_GE(theoretical_L(2, 0.25), theoretical_L(2, 0.5));
  EXPECT_THROW(theoretical_L(1, 0.0), std::domain_error);
  EXPECT_THROW(theoretical_L(1, 1.0), std::domain_error);
}

TEST(GuessMode, NamesRoundTrip) {
  for (GuessMode m : {GuessMode::exact_enumeration, GuessMode::oracle_assisted,
                      GuessMode::heuristic_topcost}) {
    EXPECT_EQ(parse_guess_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_guess_mode("psychic"), std::invalid_argument);
}

TEST(BuildGuesses, ExactEnumerationListsSmallSubsets) {
  const MscInstance inst = normalized(make_msc(CostFunction({1, 2, 3, 4}), {{make_modular({1, 1, 1, 1}), 2.0}}));
  GuessConfig cfg;
  cfg.mode = GuessMode::exact_enumeration;
  const auto g = build_guesses(inst, 2, cfg);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_TRUE(g.front().empty());
  for (const auto& s : g) EXPECT_LE(s.size(), 2u);
  cfg.max_guesses = 10;
  EXPECT_THROW(build_guesses(inst, 2, cfg), CapacityError);
}

TEST(BuildGuesses, TopCostAndOracleModes) {
  const MscInstance inst = normalized(abc(2.0));
  GuessConfig cfg;
  cfg.mode = GuessMode::heuristic_topcost;
  const auto top = build_guesses(inst, 1, cfg);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0], ElementSet(3, {2}));
  EXPECT_TRUE(top[1].empty());
  const auto orc = build_guesses(inst, 1, oracle(1));
  ASSERT_EQ(orc.size(), 1u);
  EXPECT_EQ(orc[0], ElementSet(3, {1}));
}

TEST(Sviridenko, Examples) {
  auto f = make_modular({1.0, 1.5});
  const CostFunction c({1, 2});
  EXPECT_EQ(sviridenko_knapsack_max(*f, c, 2), ElementSet(2, {1}));
  const CostFunction positive({1, 2});
  EXPECT_TRUE(sviridenko_knapsack_max(*f, positive, 0).empty());
  EXPECT_EQ(sviridenko_knapsack_max(*f, c, 3), ElementSet::full(2));
}

TEST(SviridenkoProperty, WithinOneMinusInvEOfBruteForceAndSerialAgrees) {
  const RngStream root(51);
  for (std::uint64_t t = 0; t < 60; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 1, 9);
    auto f = random_coverage(n, draw_size(rng, 1, 10), 0.3, rng);
    std::vector<Cost> costs(n);
    for (auto& c : costs) c = static_cast<Cost>(1 + rng.below(6));
    const CostFunction cf(costs);
    const Cost budget = static_cast<Cost>(rng.below(static_cast<std::uint64_t>(cf.total(ElementSet::full(n)) + 1)));
    const ElementSet s = sviridenko_knapsack_max(*f, cf, budget);
    EXPECT_LE(cf.total(s), budget);
    const double best = brute_force_knapsack_max(*f, cf, budget);
    EXPECT_GE(eval(*f, s), (1.0 - 1.0 / std::exp(1.0)) * best - 1e-9);
    EXPECT_EQ(s, sviridenko_knapsack_max_serial(*f, cf, budget));
  }
}

TEST(GreedyFix, Examples) {
  const MscInstance zero = make_msc(CostFunction({1, 1}), {{make_modular({1, 1}), 0.0}});
  const auto none = greedy_fix_msc(zero, 0, 5);
  EXPECT_TRUE(none.set.empty());
  EXPECT_TRUE(none.ok);

  const MscInstance three = normalized(make_msc(CostFunction({1, 1, 1}), {{make_modular({1, 1, 1}), 3.0}}));
  const auto all = greedy_fix_msc(three, 0, 3);
  EXPECT_EQ(all.set.size(), 3u);
  EXPECT_DOUBLE_EQ(all.value, 3.0);
  EXPECT_TRUE(all.ok);
}

TEST(GreedyFixProperty, ReachesOneMinusInvEAtOptimalBudget) {
  const RngStream root(52);
  for (std::uint64_t t = 0; t < 40; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = 8;
    p.r = 1;
    p.density = 0.35;
    const MscInstance inst = normalized(random_coverage_msc(p, rng));
    const auto opt = brute_force_msc(inst);
    ASSERT_TRUE(opt.feasible);
    const auto fix = greedy_fix_msc(inst, 0, opt.cost);
    EXPECT_LE(inst.cost(fix.set), opt.cost);
    EXPECT_TRUE(fix.ok);
    EXPECT_GE(fix.value, (1.0 - 1.0 / std::exp(1.0)) * inst.constraints[0].requirement - 1e-9);
  }
}

TEST(BruteForceMsc, Examples) {
  const auto zero = brute_force_msc(abc(0.0));
  EXPECT_TRUE(zero.feasible);
  EXPECT_EQ(zero.cost, 0);
  EXPECT_TRUE(zero.set.empty());

  const auto two = brute_force_msc(abc(2.0));
  EXPECT_TRUE(two.feasible);
  EXPECT_EQ(two.cost, 2);
  EXPECT_EQ(two.set, ElementSet(3, {1}));

  EXPECT_FALSE(brute_force_msc(abc(3.0)).feasible);
  const MscInstance big = make_msc(CostFunction(std::vector<Cost>(23, 1)),
                                   {{make_modular(std::vector<double>(23, 1.0)), 1.0}});
  EXPECT_THROW(brute_force_msc(big), CapacityError);
}

TEST(BruteForceMsc, ParallelMatchesSerial) {
  const RngStream root(53);
  const int threads = omp_get_max_threads();
  omp_set_num_threads(4);
  for (std::uint64_t t = 0; t < 20; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 1, 14);
    const MscInstance inst = random_coverage_msc(p, rng);
    const auto a = brute_force_msc(inst);
    const auto b = brute_force_msc_serial(inst);
    EXPECT_EQ(a.feasible, b.feasible);
    EXPECT_EQ(a.cost, b.cost);
    EXPECT_EQ(a.set, b.set);
  }
  omp_set_num_threads(threads);
}

// Guessing the L costliest optimal elements and truncating costs leaves OPT - c(S_pre), and
// the residual OPT never exceeds OPT.
TEST(ResidualOptProperty, CostTruncatedResidualKeepsTheRemainder) {
  const RngStream root(54);
  for (std::uint64_t t = 0; t < 60; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 2, 10);
    p.r = draw_size(rng, 1, 3);
    const MscInstance inst = normalized(random_coverage_msc(p, rng));
    const auto opt = brute_force_msc(inst);
    ASSERT_TRUE(opt.feasible);
    const std::size_t L = draw_size(rng, 1, 3);
    const auto guesses = build_guesses(inst, L, oracle(L));
    const ElementSet& pre = guesses.front();
    const MscInstance res = residual_msc(inst, pre, true);
    Cost floor_cost = inst.costs.declared_max();
    for (Index e : pre.indices()) floor_cost = std::min(floor_cost, inst.costs[e]);
    for (Index e = 0; e < res.n; ++e) EXPECT_LE(res.costs[e], floor_cost);
    const auto ropt = brute_force_msc(res);
    ASSERT_TRUE(ropt.feasible);
    EXPECT_EQ(ropt.cost, opt.cost - inst.cost(pre));
    const auto plain = brute_force_msc(residual_msc(inst, pre, false));
    EXPECT_LE(plain.cost, opt.cost);
  }
}

TEST(SolveMscSingle, ZeroRequirementsGiveEmptySet) {
  RngStream rng(1);
  const auto rep = solve_msc_single(abc(0.0), 0.25, oracle(1), rng);
  EXPECT_TRUE(rep.final_set.empty());
  EXPECT_EQ(rep.cost, 0);
  EXPECT_TRUE(rep.coverage_ok);
}

TEST(SolveMscSingle, GuessCoveringTheOptimumIsExact) {
  const RngStream root(55);
  for (std::uint64_t t = 0; t < 20; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 3, 9);
    const MscInstance inst = random_coverage_msc(p, rng);
    const auto opt = brute_force_msc(normalized(inst));
    RngStream r = rng.split(1);
    const auto rep = solve_msc_single(inst, 0.25, oracle(p.n), r);
    EXPECT_EQ(rep.cost, opt.cost);
    EXPECT_TRUE(rep.coverage_ok);
  }
}

TEST(SolveMscSingle, InvalidEpsIsRejected) {
  RngStream rng(1);
  EXPECT_THROW(solve_msc_single(abc(1.0), 0.0, oracle(1), rng), std::invalid_argument);
  EXPECT_THROW(solve_msc_multi(abc(1.0), 0, 0.2, oracle(1), rng), std::invalid_argument);
}

TEST(SolveMscProperty, CoverageHoldsOnEverySeedAndRunsAreReproducible) {
  const RngStream root(56);
  const GuessMode modes[] = {GuessMode::oracle_assisted, GuessMode::heuristic_topcost,
                             GuessMode::exact_enumeration};
  for (std::uint64_t t = 0; t < 60; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 2, 9);
    p.r = draw_size(rng, 1, 3);
    const MscInstance inst = random_coverage_msc(p, rng);
    GuessConfig cfg;
    cfg.mode = modes[t % 3];
    cfg.L_override = rng.below(3);
    const std::size_t alpha = 1 + rng.below(2);
    RngStream a = rng.split(1), b = rng.split(1);
    const auto rep = solve_msc_multi(inst, alpha, 0.25, cfg, a);
    EXPECT_TRUE(rep.coverage_ok);
    for (std::size_t i = 0; i < inst.r(); ++i) {
      EXPECT_GE(rep.values[i], rep.coverage_target * inst.constraints[i].requirement - kCoverTol);
    }
    EXPECT_DOUBLE_EQ(rep.coverage_target, 1.0 - std::exp(-static_cast<double>(alpha)) - 0.25);
    EXPECT_EQ(rep.cost, inst.cost(rep.final_set));
    EXPECT_EQ(rep.rounds.size(), alpha);
    const auto again = solve_msc_multi(inst, alpha, 0.25, cfg, b);
    EXPECT_EQ(again.final_set, rep.final_set);
  }
}

TEST(SolveMscMulti, OneRoundMatchesSingleRound) {
  const RngStream root(57);
  for (std::uint64_t t = 0; t < 15; ++t) {
    RngStream rng = root.split(t);
    CoverageParams p;
    p.n = draw_size(rng, 3, 8);
    const MscInstance inst = random_coverage_msc(p, rng);
    RngStream a = rng.split(1), b = rng.split(1);
    const auto multi = solve_msc_multi(inst, 1, 0.2, oracle(1), a);
    const auto single = solve_msc_single(inst, 0.2, oracle(1), b);
    EXPECT_EQ(multi.final_set, single.final_set);
    EXPECT_EQ(multi.cost, single.cost);
  }
}

TEST(SolveMscMulti, CoveredAfterFirstRoundAddsNothingLater) {
  RngStream rng(3);
  const auto rep = solve_msc_multi(abc(2.0), 3, 0.2, oracle(3), rng);
  ASSERT_EQ(rep.rounds.size(), 3u);
  EXPECT_EQ(rep.final_set, ElementSet(3, {1}));
  EXPECT_TRUE(rep.rounds[1].final_set.empty());
  EXPECT_TRUE(rep.rounds[2].final_set.empty());
}

// Mean cost over seeds stays within (1 + ε) OPT plus three standard errors.
TEST(SolveMscStatistics, MeanCostRatioWithinBound) {
  const RngStream root(58);
  const double eps = 0.25;
  const int trials = 200;
  double sum = 0.0, sq = 0.0;
  int used = 0;
  for (int s = 0; s < trials; ++s) {
    RngStream rng = root.split(static_cast<std::uint64_t>(s));
    CoverageParams p;
    p.n = 8;
    const MscInstance inst = random_coverage_msc(p, rng);
    const auto opt = brute_force_msc(normalized(inst));
    ASSERT_TRUE(opt.feasible);
    if (opt.cost == 0) continue;
    RngStream r = rng.split(1);
    const auto rep = solve_msc_single(inst, eps, oracle(1), r);
    ASSERT_TRUE(rep.coverage_ok);
    const double ratio = static_cast<double>(rep.cost) / static_cast<double>(opt.cost);
    sum += ratio;
    sq += ratio * ratio;
    ++used;
  }
  ASSERT_GT(used, 0);
  const double mean = sum / used;
  const double se = std::sqrt(std::max(0.0, sq / used - mean * mean) / used);
  EXPECT_LE(mean, 1.0 + eps + 3.0 * se);
}
