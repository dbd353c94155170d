#pragma once

#include <cstdint>

#include "balens/dataset.hpp"

namespace balens {

// Desk-scale cohort stand-in. The first half (rounded up) of the numeric
// columns are informative: positives are drawn from N(class_separation, 1)
// instead of N(0, 1). The rest are pure noise. Categorical columns hold
// three tokens; negatives pick uniformly while positives skew toward the
// earlier tokens with strength class_separation. Missing cells are injected
// completely at random at missing_rate.
struct SynthSpec {
  std::size_t n = 0;
  std::size_t p_numeric = 20;
  std::size_t p_categorical = 2;
  double positive_rate = 0.1;
  double class_separation = 1.0;
  double missing_rate = 0.0;
  std::uint64_t seed = 0;
};

// Informative columns are named num_i{k}, noise columns num_n{k},
// categorical columns cat{k}.
std::size_t informative_numeric_count(const SynthSpec& spec);

// The positive count is exactly round(n * positive_rate). Throws SpecInvalid
// when n < 4, a rate is out of range, the rounded positive count leaves a
// class empty, separation is negative, or there are no features at all.
Dataset generate_synthetic(const SynthSpec& spec);

}  // namespace balens
