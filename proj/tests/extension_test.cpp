#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <memory>

#include "mcover/errors.hpp"
#include "mcover/extension.hpp"
#include "mcover/rng.hpp"
#include "test_support.hpp"

using namespace mcover;
using mcover::testing::draw_size;
using mcover::testing::random_coverage;
using mcover::testing::random_point;

namespace {

std::shared_ptr<WeightedCoverageFunction> two_disjoint() {
  return std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{0}, {1}},
                                                    std::vector<double>{1.0, 1.0});
}

}  // namespace

TEST(Rng, SameSeedSameSequence) {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, SplitIgnoresDrawPosition) {
  RngStream a(7), b(7);
  for (int i = 0; i < 13; ++i) b.next_u64();
  RngStream ca = a.split(3), cb = b.split(3);
  EXPECT_EQ(ca.next_u64(), cb.next_u64());
  EXPECT_NE(a.split(3).seed(), a.split(4).seed());
}

TEST(Rng, BelowStaysInRange) {
  RngStream r(5);
  for (int i = 0; i < 1000; ++i) ASSERT_LT(r.below(7), 7u);
}

TEST(FractionalPoint, RejectsOutOfRangeCoordinates) {
  EXPECT_THROW(FractionalPoint(std::vector<double>{1.5}), std::invalid_argument);
  EXPECT_THROW(FractionalPoint(std::vector<double>{-0.1}), std::invalid_argument);
  FractionalPoint x(2);
  EXPECT_THROW(x.set(0, 2.0), std::invalid_argument);
}

TEST(MleExact, Examples) {
  auto f = two_disjoint();
  EXPECT_DOUBLE_EQ(mle_exact(*f, FractionalPoint(std::vector<double>{0.5, 0.5})), 1.0);
  EXPECT_DOUBLE_EQ(mle_exact(*f, FractionalPoint(std::vector<double>{1.0, 1.0})), 2.0);
  EXPECT_DOUBLE_EQ(mle_exact(*f, FractionalPoint(std::vector<double>{0.0, 0.0})), 0.0);
}

TEST(MleExact, CapacityErrorAboveTwentyElements) {
  auto f = make_modular(std::vector<double>(21, 1.0));
  EXPECT_THROW(mle_exact(*f, FractionalPoint(21)), CapacityError);
}

TEST(MleExact, IndicatorGivesSetValue) {
  const RngStream root(21);
  for (std::uint64_t t = 0; t < 20; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 1, 10);
    auto f = random_coverage(n, 8, 0.3, rng);
    for (std::uint64_t m = 0; m < (1ULL << n); m += 1 + rng.below(5)) {
      const ElementSet s = ElementSet::from_mask(n, m);
      ASSERT_NEAR(mle_exact(*f, FractionalPoint::indicator(s)), eval(*f, s), 1e-9);
    }
  }
}

TEST(MleExact, CoordinatewiseMonotone) {
  const RngStream root(22);
  for (std::uint64_t t = 0; t < 30; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 1, 8);
    auto f = random_coverage(n, 8, 0.3, rng);
    FractionalPoint x = random_point(n, rng);
    const Index e = rng.below(n);
    const double before = mle_exact(*f, x);
    x.set(e, std::min(1.0, x[e] + 0.25));
    EXPECT_GE(mle_exact(*f, x), before - 1e-12);
  }
}

// The serial reference sums in plain mask order; the parallel kernel sums fixed chunks, so
// the two agree to rounding while the kernel is bit-identical across thread counts.
TEST(MleExact, ParallelMatchesSerialReference) {
  const RngStream root(23);
  const int threads = omp_get_max_threads();
  for (std::uint64_t t = 0; t < 10; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 8, 16);
    auto f = random_coverage(n, 20, 0.2, rng);
    const FractionalPoint x = random_point(n, rng);
    const double serial = mle_exact_serial(*f, x);
    omp_set_num_threads(4);
    const double four = mle_exact(*f, x);
    omp_set_num_threads(1);
    const double one = mle_exact(*f, x);
    omp_set_num_threads(threads);
    EXPECT_NEAR(four, serial, 1e-9 * std::max(1.0, serial));
    EXPECT_EQ(four, one);
  }
}

TEST(MleExact, TableAndGradientAgreeWithDefinitions) {
  const RngStream root(24);
  for (std::uint64_t t = 0; t < 10; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = draw_size(rng, 2, 9);
    auto f = random_coverage(n, 10, 0.3, rng);
    const FractionalPoint x = random_point(n, rng);
    const auto table = value_table(*f);
    EXPECT_NEAR(mle_from_table(table, x), mle_exact(*f, x), 1e-9);
    const auto grad = weighted_gradient_exact(table, x);
    EXPECT_EQ(grad, weighted_gradient_exact_serial(table, x));
    for (Index e = 0; e < n; ++e) {
      // (1 - x_e) ∂F/∂x_e = (1 - x_e) (F(x | x_e = 1) - F(x | x_e = 0)).
      std::vector<double> hi = x.coords(), lo = x.coords();
      hi[e] = 1.0;
      lo[e] = 0.0;
      const double d = mle_exact(*f, FractionalPoint(hi)) - mle_exact(*f, FractionalPoint(lo));
      EXPECT_NEAR(grad[e], (1.0 - x[e]) * d, 1e-9);
    }
  }
}

TEST(MleEstimate, IntegralPointIsExact) {
  auto f = two_disjoint();
  RngStream rng(3);
  const auto est = mle_estimate(*f, FractionalPoint(std::vector<double>{1.0, 0.0}), 0.1, 0.1, rng);
  EXPECT_DOUBLE_EQ(est.value, 1.0);
}

TEST(MleEstimate, ZeroFunctionUsesOneSample) {
  auto f = std::make_shared<WeightedCoverageFunction>(std::vector<std::vector<Index>>{{}, {}},
                                                      std::vector<double>{});
  RngStream rng(3);
  const auto est = mle_estimate(*f, FractionalPoint(std::vector<double>{0.5, 0.5}), 0.1, 0.1, rng);
  EXPECT_DOUBLE_EQ(est.value, 0.0);
  EXPECT_EQ(est.samples, 1u);
}

TEST(MleEstimate, HoeffdingSampleCount) {
  EXPECT_EQ(hoeffding_samples(2.0, 0.05, 0.01), static_cast<std::size_t>(std::ceil(std::log(200.0) * 4.0 / (2 * 0.0025))));
  EXPECT_EQ(hoeffding_samples(0.0, 0.05, 0.01), 1u);
}

TEST(MleEstimate, WithinToleranceInAtLeast99PercentOfSeeds) {
  auto f = two_disjoint();
  const FractionalPoint x(std::vector<double>{0.5, 0.5});
  int hits = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    RngStream rng(s);
    if (std::abs(mle_estimate(*f, x, 0.05, 0.01, rng).value - 1.0) <= 0.05) ++hits;
  }
  EXPECT_GE(hits, 990);
}

TEST(MleEstimate, IndependentOfThreadCount) {
  const RngStream root(25);
  RngStream gen = root.split(0);
  auto f = random_coverage(12, 15, 0.25, gen);
  const FractionalPoint x = random_point(12, gen);
  const int threads = omp_get_max_threads();
  RngStream a(99), b(99), c(99);
  omp_set_num_threads(4);
  const double parallel = mle_estimate(*f, x, 0.2, 0.05, a).value;
  omp_set_num_threads(1);
  const double one = mle_estimate(*f, x, 0.2, 0.05, b).value;
  omp_set_num_threads(threads);
  EXPECT_EQ(parallel, one);
  EXPECT_EQ(parallel, mle_estimate_serial(*f, x, 0.2, 0.05, c).value);
}

TEST(IndependentRound, Extremes) {
  RngStream rng(1);
  EXPECT_EQ(independent_round(FractionalPoint(std::vector<double>(5, 1.0)), rng), ElementSet::full(5));
  EXPECT_EQ(independent_round(FractionalPoint(std::vector<double>(5, 0.0)), rng), ElementSet(5));
}

TEST(IndependentRound, HalfInclusionFrequency) {
  int in = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    RngStream rng(s);
    in += independent_round(FractionalPoint(std::vector<double>{0.5}), rng).contains(0) ? 1 : 0;
  }
  EXPECT_GE(in, 4700);
  EXPECT_LE(in, 5300);
}

TEST(IndependentRound, ReproduciblePerSeed) {
  const FractionalPoint x(std::vector<double>{0.3, 0.6, 0.9, 0.1});
  RngStream a(8), b(8);
  EXPECT_EQ(independent_round(x, a), independent_round(x, b));
}

// For an ℓ-Lipschitz coverage function, Pr[f(R) <= (1-δ)F(x)] <= exp(-δ²F(x)/(2ℓ)).
TEST(Concentration, LipschitzLowerTail) {
  const RngStream root(26);
  for (std::uint64_t t = 0; t < 4; ++t) {
    RngStream rng = root.split(t);
    const std::size_t n = 16;
    // Unit points, each element covering a couple of private points: f(e) <= 3.
    std::vector<std::vector<Index>> covers(n);
    Index next = 0;
    for (auto& c : covers) {
      const std::size_t k = draw_size(rng, 1, 3);
      for (std::size_t i = 0; i < k; ++i) c.push_back(next++);
    }
    WeightedCoverageFunction f(covers, std::vector<double>(next, 1.0));
    double ell = 0.0;
    for (Index e = 0; e < n; ++e) ell = std::max(ell, eval(f, ElementSet(n, {e})));
    const FractionalPoint x = random_point(n, rng);
    const double F = mle_exact(f, x);
    const double delta = 0.3;
    const int trials = 10000;
    int low = 0;
    for (int s = 0; s < trials; ++s) {
      RngStream r = rng.split(100 + static_cast<std::uint64_t>(s));
      if (eval(f, independent_round(x, r)) <= (1.0 - delta) * F) ++low;
    }
    const double bound = std::exp(-delta * delta * F / (2.0 * ell));
    const double freq = static_cast<double>(low) / trials;
    const double se = std::sqrt(std::max(bound * (1.0 - bound), 1e-4) / trials);
    EXPECT_LE(freq, bound + 3.0 * se) << "F " << F << " ell " << ell;
  }
}
