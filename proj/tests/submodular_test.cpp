#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "mcover/instances.hpp"
#include "mcover/submodular.hpp"
#include "test_support.hpp"

using namespace mcover;
using mcover::testing::draw_size;
using mcover::testing::random_coverage;

namespace {

// a -> {x}, b -> {x, y}, c -> {y}; unit weights.
std::shared_ptr<WeightedCoverageFunction> abc() {
  return std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{0}, {0, 1}, {1}},
                                                    std::vector<double>{1.0, 1.0});
}

// Exhaustive lattice checks of f(A) + f(B) >= f(A ∪ B) + f(A ∩ B) and monotonicity.
void expect_monotone_submodular(const SubmodularOracle& f) {
  const std::size_t n = f.ground_size();
  ASSERT_LE(n, 10u);
  std::vector<double> v(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < v.size(); ++m) v[m] = eval(f, ElementSet::from_mask(n, m));
  EXPECT_NEAR(v[0], 0.0, 1e-12);
  for (std::uint64_t a = 0; a < v.size(); ++a) {
    for (std::uint64_t b = 0; b < v.size(); ++b) {
      ASSERT_GE(v[a] + v[b], v[a | b] + v[a & b] - 1e-9) << "sets " << a << ", " << b;
      if ((a & b) == a) {
        ASSERT_LE(v[a], v[b] + 1e-9);
      }
    }
  }
}

}  // namespace

TEST(Eval, CoverageUnionOfPointSets) {
  auto f = abc();
  EXPECT_DOUBLE_EQ(eval(*f, ElementSet(3, {0, 1})), 2.0);
  EXPECT_DOUBLE_EQ(eval(*f, ElementSet(3)), 0.0);
}

TEST(Eval, TruncationCapsTheValue) {
  auto f = std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{0, 1}},
                                                      std::vector<double>{1.0, 1.0});
  ASSERT_DOUBLE_EQ(eval(*f, ElementSet(1, {0})), 2.0);
  TruncatedFunction t(f, 1.0);
  EXPECT_DOUBLE_EQ(eval(t, ElementSet(1, {0})), 1.0);
}

TEST(Eval, GroundMismatchIsADomainError) {
  auto f = abc();
  EXPECT_THROW(eval(*f, ElementSet(4)), std::domain_error);
  EXPECT_THROW(marginal(*f, 3, ElementSet(3)), std::domain_error);
}

TEST(Marginal, Examples) {
  auto overlap = std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{0}, {0}},
                                                            std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(marginal(*overlap, 1, ElementSet(2, {0})), 0.0);
  auto disjoint = std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{0}, {1}},
                                                             std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(marginal(*disjoint, 1, ElementSet(2, {0})), 1.0);
  EXPECT_DOUBLE_EQ(marginal(*disjoint, 0, ElementSet(2, {0})), 0.0);
}

TEST(Coverage, RejectsBadData) {
  EXPECT_THROW(WeightedCoverageFunction({{0}}, {-1.0}), std::invalid_argument);
  EXPECT_THROW(WeightedCoverageFunction({{3}}, {1.0}), std::invalid_argument);
  EXPECT_THROW(WeightedCoverageFunction({{0}}, {NAN}), std::invalid_argument);
}

TEST(Modular, SumsElementWeights) {
  auto w = make_modular({1.5, 2.0, 0.5});
  EXPECT_DOUBLE_EQ(eval(*w, ElementSet(3, {0, 2})), 2.0);
  EXPECT_DOUBLE_EQ(eval(*w, ElementSet::full(3)), 4.0);
}

TEST(ResidualMsc, EmptyAnchorIsIdentity) {
  MscInstance inst = make_msc(CostFunction({1, 2, 3}), {{abc(), 2.0}});
  MscInstance res = residual_msc(inst, ElementSet(3), false);
  ASSERT_EQ(res.n, 3u);
  EXPECT_EQ(res.costs.values(), inst.costs.values());
  EXPECT_DOUBLE_EQ(res.constraints[0].requirement, 2.0);
  for (std::uint64_t m = 0; m < 8; ++m) {
    EXPECT_DOUBLE_EQ(eval(*res.constraints[0].f, ElementSet::from_mask(3, m)),
                     eval(*inst.constraints[0].f, ElementSet::from_mask(3, m)));
  }
}

TEST(ResidualMsc, RequirementDropsByAnchorValue) {
  // Points x, y of weight 1; element 0 covers x.
  auto f = std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{0}, {1}},
                                                      std::vector<double>{1.0, 1.0});
  MscInstance inst = make_msc(CostFunction({1, 1}), {{f, 2.0}});
  MscInstance res = residual_msc(inst, ElementSet(2, {0}), false);
  EXPECT_DOUBLE_EQ(res.constraints[0].requirement, 1.0);
  ASSERT_EQ(res.n, 1u);
  EXPECT_EQ(res.origin, std::vector<Index>{1});
}

TEST(ResidualMsc, CostTruncationDropsDearerElements) {
  MscInstance inst = make_msc(CostFunction({5, 7}), {{make_modular({1.0, 1.0}), 1.0}});
  EXPECT_EQ(residual_msc(inst, ElementSet(2, {0}), true).n, 0u);
  EXPECT_EQ(residual_msc(inst, ElementSet(2, {0}), false).n, 1u);
}

TEST(ResidualMsc, FullAnchorClampsRequirements) {
  MscInstance inst = make_msc(CostFunction({1, 2, 3}), {{abc(), 2.0}});
  MscInstance res = residual_msc(inst, ElementSet::full(3), false);
  EXPECT_EQ(res.n, 0u);
  EXPECT_DOUBLE_EQ(res.constraints[0].requirement, 0.0);
}

TEST(ResidualCcf, Examples) {
  CcfInstance inst = make_ccf(2, {{1, {0}}, {1, {1}}}, {{3.0, 4.0}}, {5.0});
  CcfInstance same = residual_ccf(inst, ElementSet(2));
  EXPECT_EQ(same.matrix, inst.matrix);
  EXPECT_EQ(same.requirements, inst.requirements);

  CcfInstance one = residual_ccf(inst, ElementSet(2, {0}));
  EXPECT_DOUBLE_EQ(one.requirements[0], 2.0);
  EXPECT_DOUBLE_EQ(one.matrix[0][0], 0.0);
  EXPECT_DOUBLE_EQ(one.matrix[0][1], 4.0);

  CcfInstance all = residual_ccf(inst, ElementSet::full(2));
  EXPECT_DOUBLE_EQ(all.requirements[0], 0.0);
  EXPECT_DOUBLE_EQ(all.matrix[0][0] + all.matrix[0][1], 0.0);
}

TEST(RestrictUniverse, Examples) {
  CcfInstance inst = make_ccf(3, {{2, {0, 1}}, {1, {2}}}, {{1.0, 1.0, 1.0}}, {1.0});
  CcfInstance full = restrict_universe(inst, ElementSet::full(3));
  EXPECT_EQ(full.sets[0].points, inst.sets[0].points);
  EXPECT_EQ(full.universe_size, 3u);

  CcfInstance none = restrict_universe(inst, ElementSet(3));
  EXPECT_EQ(none.universe_size, 0u);
  EXPECT_TRUE(none.sets[0].points.empty());
  EXPECT_TRUE(none.matrix[0].empty());
  EXPECT_DOUBLE_EQ(none.requirements[0], 1.0);

  CcfInstance j = restrict_universe(inst, ElementSet(3, {0}));
  EXPECT_EQ(j.sets[0].points, std::vector<Index>{0});
  EXPECT_EQ(j.point_origin, std::vector<Index>{0});
  EXPECT_TRUE(j.sets[1].points.empty());
}

TEST(CcfInstance, FlagsInfeasibleInput) {
  CcfInstance inst = make_ccf(2, {{1, {0}}}, {{1.0, 1.0}}, {2.0});
  EXPECT_THROW(check_ccf_feasible(inst), std::invalid_argument);
  EXPECT_THROW(make_ccf(2, {{1, {5}}}, {{1.0, 1.0}}, {1.0}), std::invalid_argument);
  EXPECT_THROW(make_ccf(2, {{-1, {0}}}, {{1.0, 1.0}}, {1.0}), std::invalid_argument);
}

TEST(CostFunction, DiscretizeKeepsIntegersAndScalesFractions) {
  const std::vector<double> whole{3.0, 0.0, 9.0};
  CostFunction c = CostFunction::discretize(whole);
  EXPECT_EQ(c.values(), (std::vector<Cost>{3, 0, 9}));
  EXPECT_DOUBLE_EQ(c.scale(), 1.0);

  const std::vector<double> frac{0.5, 1.0, 0.25};
  CostFunction d = CostFunction::discretize(frac);
  EXPECT_EQ(d.values(), (std::vector<Cost>{500, 1000, 250}));
  EXPECT_EQ(d.declared_max(), 1000);
  const std::vector<double> negative{-1.0};
  EXPECT_THROW(CostFunction::discretize(negative), std::invalid_argument);
}

TEST(Normalized, RejectsUnreachableRequirement) {
  MscInstance inst = make_msc(CostFunction({1, 2, 3}), {{abc(), 3.0}});
  EXPECT_THROW(normalized(inst), std::invalid_argument);
  MscInstance ok = normalized(with_requirements(inst, {1.0}));
  EXPECT_DOUBLE_EQ(eval(*ok.constraints[0].f, ElementSet::full(3)), 1.0);
}

TEST(SubmodularProperty, BundledFamiliesAreMonotoneSubmodular) {
  const RngStream root(11);
  for (std::uint64_t t = 0; t < 40; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 1, 8);
    auto f = random_coverage(n, draw_size(rng, 1, 10), 0.3, rng);
    expect_monotone_submodular(*f);
    const double top = eval(*f, ElementSet::full(n));
    expect_monotone_submodular(TruncatedFunction(f, top * rng.uniform()));
    ElementSet anchor = mcover::testing::random_subset(n, 0.3, rng);
    expect_monotone_submodular(ResidualFunction(f, anchor));
    std::vector<double> w(n);
    for (auto& v : w) v = rng.uniform(0.0, 3.0);
    expect_monotone_submodular(*make_modular(w));
  }
}

TEST(SubmodularProperty, TruncationNeverExceedsCap) {
  const RngStream root(12);
  for (std::uint64_t t = 0; t < 50; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 1, 8);
    auto f = random_coverage(n, 6, 0.4, rng);
    const double cap = rng.uniform(0.0, 10.0);
    TruncatedFunction tf(f, cap);
    for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
      const ElementSet s = ElementSet::from_mask(n, m);
      const double base = eval(*f, s);
      EXPECT_LE(eval(tf, s), cap + 1e-12);
      if (base <= cap) {
        EXPECT_DOUBLE_EQ(eval(tf, s), base);
      }
    }
  }
}

TEST(SubmodularProperty, EmptyAnchorResidualEqualsBase) {
  const RngStream root(13);
  for (std::uint64_t t = 0; t < 30; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 1, 8);
    auto f = random_coverage(n, 7, 0.3, rng);
    ResidualFunction res(f, ElementSet(n));
    for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
      const ElementSet s = ElementSet::from_mask(n, m);
      EXPECT_DOUBLE_EQ(eval(res, s), eval(*f, s) - eval(*f, ElementSet(n)));
    }
  }
}

TEST(SubmodularProperty, ResidualsCompose) {
  const RngStream root(14);
  for (std::uint64_t t = 0; t < 40; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 2, 8);
    std::vector<Cost> costs(n);
    for (auto& c : costs) c = 1 + static_cast<Cost>(rng.below(9));
    auto f = random_coverage(n, 8, 0.3, rng);
    const double b = std::floor(eval(*f, ElementSet::full(n)) * 0.7);
    MscInstance inst = make_msc(CostFunction(costs), {{f, b}});
    const ElementSet A = mcover::testing::random_subset(n, 0.3, rng);
    MscInstance first = residual_msc(inst, A, false);
    const ElementSet A2 = mcover::testing::random_subset(first.n, 0.3, rng);
    MscInstance twice = residual_msc(first, A2, false);
    ElementSet both = A;
    both.unite(first.lift(A2));
    MscInstance once = residual_msc(inst, both, false);
    ASSERT_EQ(twice.n, once.n);
    EXPECT_EQ(twice.origin, once.origin);
    EXPECT_NEAR(twice.constraints[0].requirement, once.constraints[0].requirement, 1e-9);
    for (std::uint64_t m = 0; m < (1ULL << once.n); ++m) {
      const ElementSet s = ElementSet::from_mask(once.n, m);
      EXPECT_NEAR(eval(*twice.constraints[0].f, s), eval(*once.constraints[0].f, s), 1e-9);
    }
  }
}
