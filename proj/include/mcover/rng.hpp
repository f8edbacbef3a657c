#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mcover {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded mt19937_64 stream. Child streams depend only on (seed, index), never on how many
// draws the parent has made, so parallel fan-out is independent of worker count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }
  // Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  RngStream split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace mcover
