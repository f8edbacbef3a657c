// Serial reference vs OpenMP kernel, pairwise on identical inputs.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "mcover/brute_force.hpp"
#include "mcover/extension.hpp"
#include "mcover/flmo_pricing.hpp"
#include "mcover/generators.hpp"
#include "mcover/msc_solver.hpp"

using namespace mcover;

namespace {

struct CoverageFixture {
  MscInstance inst;
  FractionalPoint x;
  std::vector<double> table;

  explicit CoverageFixture(std::size_t n) {
    RngStream rng(n);
    CoverageParams p;
    p.n = n;
    p.points = 40;
    p.r = 1;
    p.density = 0.15;
    inst = random_coverage_msc(p, rng);
    std::vector<double> coords(n);
    for (auto& c : coords) c = rng.uniform();
    x = FractionalPoint(coords);
    table = value_table(*inst.constraints[0].f);
  }
};

const CoverageFixture& coverage(std::size_t n) {
  static std::vector<std::unique_ptr<CoverageFixture>> cache(32);
  if (!cache[n]) cache[n] = std::make_unique<CoverageFixture>(n);
  return *cache[n];
}

template <bool Parallel>
void BM_MleExact(benchmark::State& state) {
  const auto& fx = coverage(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto& f = *fx.inst.constraints[0].f;
    benchmark::DoNotOptimize(Parallel ? mle_exact(f, fx.x) : mle_exact_serial(f, fx.x));
  }
}

template <bool Parallel>
void BM_Gradient(benchmark::State& state) {
  const auto& fx = coverage(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? weighted_gradient_exact(fx.table, fx.x)
                                      : weighted_gradient_exact_serial(fx.table, fx.x));
  }
}

template <bool Parallel>
void BM_MleEstimate(benchmark::State& state) {
  const auto& fx = coverage(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    RngStream rng(7);
    const auto& f = *fx.inst.constraints[0].f;
    benchmark::DoNotOptimize(Parallel ? mle_estimate(f, fx.x, 0.2, 0.05, rng)
                                      : mle_estimate_serial(f, fx.x, 0.2, 0.05, rng));
  }
}

template <bool Parallel>
void BM_BruteForceMsc(benchmark::State& state) {
  const auto& fx = coverage(static_cast<std::size_t>(state.range(0)));
  const MscInstance inst = with_requirements(fx.inst, {0.7 * eval(*fx.inst.constraints[0].f,
                                                                   fx.inst.ground())});
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? brute_force_msc(inst) : brute_force_msc_serial(inst));
  }
}

template <bool Parallel>
void BM_Sviridenko(benchmark::State& state) {
  const auto& fx = coverage(static_cast<std::size_t>(state.range(0)));
  const Cost budget = fx.inst.cost(fx.inst.ground()) / 3;
  const auto& f = *fx.inst.constraints[0].f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? sviridenko_knapsack_max(f, fx.inst.costs, budget)
                                      : sviridenko_knapsack_max_serial(f, fx.inst.costs, budget));
  }
}

struct PricingFixture {
  FlmoInstance inst;
  ScaledInstance scaled;
  ResidualStarSystem sys;
  std::vector<double> alpha;

  explicit PricingFixture(std::size_t facilities) {
    RngStream rng(facilities);
    FlmoParams p;
    p.facilities = facilities;
    p.clients = 40;
    inst = random_metric_flmo(p, rng);
    double ub = 0.0;
    for (double f : inst.opening) ub += f;
    for (Index j = 0; j < inst.num_clients; ++j) ub += inst.d(0, j);
    scaled = scale_and_prune(inst, ub);
    sys = build_residual_system(scaled, {});
    alpha.assign(inst.num_clients, 0.0);
    for (Index j : sys.clients) alpha[j] = rng.uniform() * static_cast<double>(scaled.B) / 20.0;
  }
};

template <bool Parallel>
void BM_PriceAll(benchmark::State& state) {
  static std::vector<std::unique_ptr<PricingFixture>> cache(64);
  const auto n = static_cast<std::size_t>(state.range(0));
  if (!cache[n]) cache[n] = std::make_unique<PricingFixture>(n);
  const auto& fx = *cache[n];
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? price_all(fx.sys, fx.alpha) : price_all_serial(fx.sys, fx.alpha));
  }
}

}  // namespace

BENCHMARK(BM_MleExact<false>)->Name("mle_exact/serial")->Arg(14)->Arg(18);
BENCHMARK(BM_MleExact<true>)->Name("mle_exact/omp")->Arg(14)->Arg(18);
BENCHMARK(BM_Gradient<false>)->Name("gradient/serial")->Arg(14)->Arg(18);
BENCHMARK(BM_Gradient<true>)->Name("gradient/omp")->Arg(14)->Arg(18);
BENCHMARK(BM_MleEstimate<false>)->Name("mle_estimate/serial")->Arg(20);
BENCHMARK(BM_MleEstimate<true>)->Name("mle_estimate/omp")->Arg(20);
BENCHMARK(BM_BruteForceMsc<false>)->Name("brute_force_msc/serial")->Arg(16);
BENCHMARK(BM_BruteForceMsc<true>)->Name("brute_force_msc/omp")->Arg(16);
BENCHMARK(BM_Sviridenko<false>)->Name("sviridenko/serial")->Arg(20);
BENCHMARK(BM_Sviridenko<true>)->Name("sviridenko/omp")->Arg(20);
BENCHMARK(BM_PriceAll<false>)->Name("price_all/serial")->Arg(16);
BENCHMARK(BM_PriceAll<true>)->Name("price_all/omp")->Arg(16);

BENCHMARK_MAIN();
