#include "mcover/extension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mcover/errors.hpp"
#include "mcover/parallel.hpp"

namespace mcover {

FractionalPoint::FractionalPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (std::size_t e = 0; e < coords_.size(); ++e) set(e, coords_[e]);
}

FractionalPoint FractionalPoint::indicator(const ElementSet& s) {
  FractionalPoint x(s.universe());
  s.for_each([&](Index e) { x.coords_[e] = 1.0; });
  return x;
}

void FractionalPoint::set(Index e, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("fractional coordinate " + std::to_string(e) + " = " +
                                std::to_string(v) + " outside [0,1]");
  }
  coords_.at(e) = v;
}

double FractionalPoint::cost(const CostFunction& c) const {
  if (c.size() != coords_.size()) throw std::domain_error("cost vector over the wrong ground");
  double total = 0.0;
  for (std::size_t e = 0; e < coords_.size(); ++e) total += coords_[e] * static_cast<double>(c[e]);
  return total;
}

ElementSet FractionalPoint::support() const {
  ElementSet s(coords_.size());
  for (std::size_t e = 0; e < coords_.size(); ++e) {
    if (coords_[e] > 0.0) s.insert(e);
  }
  return s;
}

bool FractionalPoint::is_integral() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

namespace {

void check_exact_size(std::size_t n, const char* what) {
  if (n > kMaxExactMle) {
    throw CapacityError(std::string(what) + ": ground size " + std::to_string(n) +
                        " exceeds enumeration bound " + std::to_string(kMaxExactMle));
  }
}

// Probabilities of every pattern over the low `lo` and high `n - lo` coordinates.
struct SplitProbabilities {
  std::size_t lo = 0;
  std::vector<double> low;
  std::vector<double> high;

  explicit SplitProbabilities(const std::vector<double>& x) {
    const std::size_t n = x.size();
    lo = n / 2;
    low = patterns(x, 0, lo);
    high = patterns(x, lo, n);
  }

  double operator()(std::uint64_t mask) const {
    return low[mask & ((1ULL << lo) - 1)] * high[mask >> lo];
  }

  static std::vector<double> patterns(const std::vector<double>& x, std::size_t from,
                                      std::size_t to) {
    std::vector<double> p{1.0};
    for (std::size_t e = from; e < to; ++e) {
      const std::size_t half = p.size();
      p.resize(2 * half);
      for (std::size_t m = 0; m < half; ++m) {
        p[m + half] = p[m] * x[e];
        p[m] *= 1.0 - x[e];
      }
    }
    return p;
  }
};

}  // namespace

double mle_exact_serial(const SubmodularOracle& f, const FractionalPoint& x) {
  const std::size_t n = f.ground_size();
  if (x.size() != n) throw std::domain_error("mle_exact: point over the wrong ground");
  check_exact_size(n, "mle_exact");
  double total = 0.0;
  ElementSet s(n);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double p = 1.0;
    for (std::size_t e = 0; e < n; ++e) p *= ((mask >> e) & 1ULL) ? x[e] : 1.0 - x[e];
    if (p == 0.0) continue;
    s.assign_mask(mask);
    total += p * f.value(s);
  }
  return total;
}

double mle_exact(const SubmodularOracle& f, const FractionalPoint& x) {
  const std::size_t n = f.ground_size();
  if (x.size() != n) throw std::domain_error("mle_exact: point over the wrong ground");
  check_exact_size(n, "mle_exact");
  const SplitProbabilities prob(x.coords());
  const std::uint64_t total_masks = 1ULL << n;
  const std::uint64_t chunks = std::min<std::uint64_t>(kReductionChunks, total_masks);
  const std::uint64_t per_chunk = total_masks / chunks;
  std::vector<double> partial(chunks, 0.0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    ElementSet s(n);
    double acc = 0.0;
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * per_chunk;
    for (std::uint64_t mask = begin; mask < begin + per_chunk; ++mask) {
      const double p = prob(mask);
      if (p == 0.0) continue;
      s.assign_mask(mask);
      acc += p * f.value(s);
    }
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

std::vector<double> value_table(const SubmodularOracle& f) {
  const std::size_t n = f.ground_size();
  check_exact_size(n, "value_table");
  std::vector<double> table(1ULL << n);
  const std::int64_t total = static_cast<std::int64_t>(table.size());
#pragma omp parallel
  {
    ElementSet s(n);
#pragma omp for schedule(static)
    for (std::int64_t mask = 0; mask < total; ++mask) {
      s.assign_mask(static_cast<std::uint64_t>(mask));
      table[static_cast<std::size_t>(mask)] = f.value(s);
    }
  }
  return table;
}

double mle_from_table(const std::vector<double>& table, const FractionalPoint& x) {
  if (table.size() != (1ULL << x.size())) throw std::domain_error("mle_from_table: size mismatch");
  const SplitProbabilities prob(x.coords());
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) total += prob(mask) * table[mask];
  return total;
}

std::vector<double> subset_probabilities(const FractionalPoint& x) {
  check_exact_size(x.size(), "subset_probabilities");
  return SplitProbabilities::patterns(x.coords(), 0, x.size());
}

std::vector<double> weighted_gradient_exact_serial(const std::vector<double>& table,
                                                   const FractionalPoint& x) {
  const std::size_t n = x.size();
  if (table.size() != (1ULL << n)) throw std::domain_error("weighted_gradient: size mismatch");
  const std::vector<double> p = subset_probabilities(x);
  std::vector<double> w(n, 0.0);
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    if (p[s] == 0.0) continue;
    for (std::size_t e = 0; e < n; ++e) {
      if ((s >> e) & 1ULL) continue;
      w[e] += p[s] * (table[s | (1ULL << e)] - table[s]);
    }
  }
  return w;
}

std::vector<double> weighted_gradient_exact(const std::vector<double>& table,
                                            const FractionalPoint& x) {
  const std::size_t n = x.size();
  if (table.size() != (1ULL << n)) throw std::domain_error("weighted_gradient: size mismatch");
  const std::vector<double> p = subset_probabilities(x);
  std::vector<double> w(n, 0.0);
#pragma omp parallel for schedule(static) if (n >= 8)
  for (std::int64_t ei = 0; ei < static_cast<std::int64_t>(n); ++ei) {
    const std::uint64_t bit = 1ULL << ei;
    double acc = 0.0;
    for (std::uint64_t s = 0; s < table.size(); ++s) {
      if ((s & bit) != 0 || p[s] == 0.0) continue;
      acc += p[s] * (table[s | bit] - table[s]);
    }
    w[static_cast<std::size_t>(ei)] = acc;
  }
  return w;
}

std::vector<double> weighted_gradient_sampled(const SubmodularOracle& f, const FractionalPoint& x,
                                              std::size_t samples, RngStream& rng) {
  const std::size_t n = f.ground_size();
  if (x.size() != n) throw std::domain_error("weighted_gradient: point over the wrong ground");
  if (samples == 0) throw std::invalid_argument("weighted_gradient: need at least one sample");
  const std::uint64_t base = rng.next_u64();
  const std::size_t chunks = std::min(kReductionChunks, samples);
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(n, 0.0));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    RngStream local(splitmix64(base ^ splitmix64(c)));
    auto& acc = partial[c];
    for (std::size_t k = samples * c / chunks; k < samples * (c + 1) / chunks; ++k) {
      ElementSet r = independent_round(x, local);
      const double fr = f.value(r);
      for (std::size_t e = 0; e < n; ++e) {
        if (x[e] >= 1.0) continue;
        if (r.contains(e)) {
          r.erase(e);
          acc[e] += fr - f.value(r);
          r.insert(e);
        } else {
          r.insert(e);
          acc[e] += f.value(r) - fr;
          r.erase(e);
        }
      }
    }
  }
  std::vector<double> w(n, 0.0);
  for (const auto& acc : partial) {
    for (std::size_t e = 0; e < n; ++e) w[e] += acc[e];
  }
  for (std::size_t e = 0; e < n; ++e) w[e] *= (1.0 - x[e]) / static_cast<double>(samples);
  return w;
}

std::size_t hoeffding_samples(double range, double t, double delta) {
  if (!(t > 0.0)) throw std::invalid_argument("additive tolerance must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("confidence must be in (0,1)");
  const double n = std::ceil(std::log(2.0 / delta) * range * range / (2.0 * t * t));
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

namespace {

struct SamplePlan {
  std::size_t samples;
  std::uint64_t base_seed;
  std::size_t chunks;
};

SamplePlan plan_samples(const SubmodularOracle& f, const FractionalPoint& x, double t,
                        double delta, RngStream& rng) {
  if (x.size() != f.ground_size()) throw std::domain_error("mle_estimate: point over wrong ground");
  const double range = eval(f, ElementSet::full(f.ground_size()));
  const std::size_t samples = hoeffding_samples(range, t, delta);
  return {samples, rng.next_u64(), std::min(kReductionChunks, samples)};
}

double sample_chunk(const SubmodularOracle& f, const FractionalPoint& x, const SamplePlan& plan,
                    std::size_t c) {
  const std::size_t begin = plan.samples * c / plan.chunks;
  const std::size_t end = plan.samples * (c + 1) / plan.chunks;
  RngStream rng(splitmix64(plan.base_seed ^ splitmix64(c)));
  double acc = 0.0;
  for (std::size_t k = begin; k < end; ++k) acc += f.value(independent_round(x, rng));
  return acc;
}

}  // namespace

MleEstimate mle_estimate_serial(const SubmodularOracle& f, const FractionalPoint& x, double t,
                                double delta, RngStream& rng) {
  const SamplePlan plan = plan_samples(f, x, t, delta, rng);
  double total = 0.0;
  for (std::size_t c = 0; c < plan.chunks; ++c) total += sample_chunk(f, x, plan, c);
  return {total / static_cast<double>(plan.samples), plan.samples, t, delta};
}

MleEstimate mle_estimate(const SubmodularOracle& f, const FractionalPoint& x, double t,
                         double delta, RngStream& rng) {
  const SamplePlan plan = plan_samples(f, x, t, delta, rng);
  std::vector<double> partial(plan.chunks, 0.0);
#pragma omp parallel for schedule(dynamic, 1) if (plan.samples > 256)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(plan.chunks); ++c) {
    partial[static_cast<std::size_t>(c)] = sample_chunk(f, x, plan, static_cast<std::size_t>(c));
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return {total / static_cast<double>(plan.samples), plan.samples, t, delta};
}

ElementSet independent_round(const FractionalPoint& x, RngStream& rng) {
  ElementSet s(x.size());
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (rng.uniform() < x[e]) s.insert(e);
  }
  return s;
}

}  // namespace mcover
