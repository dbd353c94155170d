#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

#include "balens/errors.hpp"

namespace balens {

// splitmix64 finalizer; used to derive well-separated stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for an independent child stream. Experiments are wired so that every
// parallel unit of work (ensemble member, fold, classifier) gets its own
// stream derived from (parent seed, fixed stream id); results are then
// independent of scheduling and thread count.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x51ED270B9A7AULL));
}

// Deterministic random source. The engine is the 64-bit Mersenne Twister
// (std::mt19937_64), whose output sequence for a given seed is fixed by the
// C++ standard, so runs reproduce across platforms and compilers. All
// distributions are implemented on top of raw engine words because the
// std::*_distribution mappings are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Unbiased uniform draw from [0, bound) via rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("Rng::below: bound must be positive");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t overflow = (max % bound + 1) % bound;  // 2^64 mod bound
    const std::uint64_t cutoff = max - overflow;               // accept r <= cutoff
    std::uint64_t r = next();
    while (r > cutoff) r = next();
    return r % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; two engine words per draw.
  double normal() {
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    const double u2 = unit();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  Rng child(std::uint64_t stream) const { return Rng(child_seed(seed_, stream)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace balens
