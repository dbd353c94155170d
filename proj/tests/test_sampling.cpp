#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "balens/errors.hpp"
#include "balens/sampling.hpp"

using namespace balens;

namespace {

std::vector<int> imbalanced_labels(std::size_t negatives, std::size_t positives) {
  std::vector<int> labels(negatives, 0);
  labels.insert(labels.end(), positives, 1);
  return labels;
}

}  // namespace

TEST_CASE("undersample returns an exactly balanced sorted subsample") {
  const std::vector<int> labels = imbalanced_labels(90, 10);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const IndexSample sample = random_undersample(labels, rng);
    REQUIRE(sample.indices.size() == 20);
    CHECK(sample.weights.empty());
    CHECK(std::is_sorted(sample.indices.begin(), sample.indices.end()));
    std::size_t pos = 0;
    std::set<std::size_t> seen;
    for (std::size_t idx : sample.indices) {
      pos += static_cast<std::size_t>(labels[idx]);
      CHECK(seen.insert(idx).second);
    }
    CHECK(pos == 10);
  }
}

TEST_CASE("undersample passes balanced data through untouched") {
  const std::vector<int> labels = {0, 1, 0, 1};
  Rng rng(5);
  const std::uint64_t first_before = Rng(5).next();
  const IndexSample sample = random_undersample(labels, rng);
  CHECK(sample.indices == std::vector<std::size_t>{0, 1, 2, 3});
  // generator untouched on the identity path
  CHECK(rng.next() == first_before);
}

TEST_CASE("undersample determinism and errors") {
  const std::vector<int> labels = imbalanced_labels(30, 7);
  Rng a(42);
  Rng b(42);
  CHECK(random_undersample(labels, a).indices == random_undersample(labels, b).indices);

  Rng rng(1);
  const std::vector<int> empty;
  CHECK_THROWS_AS(random_undersample(empty, rng), EmptyInput);
  const std::vector<int> single = {1, 1, 1};
  CHECK_THROWS_AS(random_undersample(single, rng), SingleClassDataset);
}

TEST_CASE("bootstrap draws n rows with replacement") {
  Rng rng(9);
  const IndexSample sample = bootstrap(1000, rng);
  REQUIRE(sample.indices.size() == 1000);
  std::set<std::size_t> distinct(sample.indices.begin(), sample.indices.end());
  for (std::size_t idx : sample.indices) CHECK(idx < 1000);
  // distinct fraction concentrates near 1 - 1/e
  const double fraction = static_cast<double>(distinct.size()) / 1000.0;
  CHECK(fraction > 0.582);
  CHECK(fraction < 0.682);
  CHECK_THROWS_AS(bootstrap(0, rng), EmptyInput);
}

TEST_CASE("weighted sampling without replacement favors heavy entries") {
  const std::vector<std::size_t> pool = {0, 1, 2, 3};
  const std::vector<double> weights = {100.0, 1.0, 1.0, 1.0};
  std::size_t heavy_first = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto picked = weighted_sample_without_replacement(pool, weights, 2, rng);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0] != picked[1]);
    if (picked[0] == 0) ++heavy_first;
  }
  CHECK(heavy_first > 180);

  Rng rng(0);
  CHECK_THROWS_AS(weighted_sample_without_replacement(pool, weights, 5, rng), InvalidArgument);
  const std::vector<double> short_weights = {1.0};
  CHECK_THROWS_AS(weighted_sample_without_replacement(pool, short_weights, 1, rng),
                  LengthMismatch);
  const std::vector<double> negative = {1.0, -0.5, 1.0, 1.0};
  CHECK_THROWS_AS(weighted_sample_without_replacement(pool, negative, 1, rng), NegativeWeight);
}

TEST_CASE("balanced resample hits the minority count per class") {
  const std::vector<int> labels = imbalanced_labels(40, 8);
  std::vector<double> weights(labels.size(), 1.0 / static_cast<double>(labels.size()));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto rows = balanced_resample(labels, weights, rng);
    REQUIRE(rows.size() == 16);
    CHECK(std::is_sorted(rows.begin(), rows.end()));
    std::size_t pos = 0;
    for (std::size_t idx : rows) pos += static_cast<std::size_t>(labels[idx]);
    CHECK(pos == 8);
  }
}

TEST_CASE("stratified folds partition rows with near-equal class shares") {
  const std::vector<int> labels = imbalanced_labels(83, 19);
  Rng rng(3);
  const FoldPlan plan = stratified_kfold(labels, 6, rng);
  REQUIRE(plan.assignment.size() == labels.size());

  std::map<std::size_t, std::size_t> pos_per_fold;
  std::map<std::size_t, std::size_t> neg_per_fold;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    REQUIRE(plan.assignment[i] < 6);
    if (labels[i] == 1) {
      ++pos_per_fold[plan.assignment[i]];
    } else {
      ++neg_per_fold[plan.assignment[i]];
    }
  }
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(pos_per_fold[k] >= 19 / 6);
    CHECK(pos_per_fold[k] <= 19 / 6 + 1);
    CHECK(neg_per_fold[k] >= 83 / 6);
    CHECK(neg_per_fold[k] <= 83 / 6 + 1);
  }

  // test and train rows of any fold partition the dataset
  for (std::size_t k = 0; k < 6; ++k) {
    const auto test = plan.test_rows(k);
    const auto train = plan.train_rows(k);
    CHECK(test.size() + train.size() == labels.size());
    std::set<std::size_t> all(test.begin(), test.end());
    all.insert(train.begin(), train.end());
    CHECK(all.size() == labels.size());
  }
}

TEST_CASE("stratified folds reject degenerate requests") {
  const std::vector<int> labels = imbalanced_labels(10, 4);
  Rng rng(0);
  CHECK_THROWS_AS(stratified_kfold(labels, 1, rng), InvalidArgument);
  CHECK_THROWS_AS(stratified_kfold(labels, 5, rng), TooFewClassMembers);
  const std::vector<int> empty;
  CHECK_THROWS_AS(stratified_kfold(empty, 2, rng), EmptyInput);
}
