#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "balens/rng.hpp"

namespace balens {

// Row selection into a parent matrix. Weights, when present, run parallel to
// the indices; an empty weight list means unweighted.
struct IndexSample {
  std::vector<std::size_t> indices;
  std::vector<double> weights;
};

// All minority rows plus an equal-sized uniform draw (without replacement)
// from the majority class, so the result is exactly balanced. When the
// classes already match every row is returned in original order and the
// generator is not consumed. Indices are sorted ascending. Throws EmptyInput
// on empty labels, SingleClassDataset when only one class is present.
IndexSample random_undersample(std::span<const int> labels, Rng& rng);

// n draws with replacement from [0, n), in draw order.
// Throws EmptyInput when n == 0.
IndexSample bootstrap(std::size_t n, Rng& rng);

// `count` distinct entries of `pool` drawn one at a time with probability
// proportional to the remaining weights. A zero-total pool falls back to
// uniform draws. Throws InvalidArgument when count exceeds the pool,
// LengthMismatch, NegativeWeight.
std::vector<std::size_t> weighted_sample_without_replacement(
    std::span<const std::size_t> pool, std::span<const double> weights, std::size_t count,
    Rng& rng);

// Per-class weighted draw down to the minority class size: each class
// contributes min-class-count rows picked without replacement with
// probability proportional to `weights`. A class already at the target size
// passes through whole without consuming the generator. Sorted ascending.
std::vector<std::size_t> balanced_resample(std::span<const int> labels,
                                           std::span<const double> weights, Rng& rng);

// Stratified K-fold assignment: each class is shuffled independently and
// dealt round-robin, so per-class per-fold counts differ by at most one.
struct FoldPlan {
  std::size_t folds = 0;
  std::vector<std::size_t> assignment;  // row -> fold id

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

// Throws InvalidArgument when folds < 2, TooFewClassMembers when some class
// has fewer rows than folds, EmptyInput on empty labels.
FoldPlan stratified_kfold(std::span<const int> labels, std::size_t folds, Rng& rng);

}  // namespace balens
