#pragma once

#include <cstdint>
#include <random>

namespace nervekit {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x);

// Seedable generator with counter-based splitting: split(i) depends only on
// the parent seed and i, so trials can run in any order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t index) const { return Rng(mix64(seed_ ^ mix64(index + 0x9e3779b97f4a7c15ULL))); }

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound), bound > 0; unbiased by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace nervekit
