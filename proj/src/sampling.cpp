#include "balens/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "balens/errors.hpp"

namespace balens {

namespace {

void split_by_class(std::span<const int> labels, std::vector<std::size_t>& neg,
                    std::vector<std::size_t>& pos) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] ? pos : neg).push_back(i);
  }
}

}  // namespace

IndexSample random_undersample(std::span<const int> labels, Rng& rng) {
  if (labels.empty()) throw EmptyInput("random_undersample: no labels");
  std::vector<std::size_t> neg;
  std::vector<std::size_t> pos;
  split_by_class(labels, neg, pos);
  if (neg.empty() || pos.empty()) {
    throw SingleClassDataset("random_undersample: both classes required");
  }
  IndexSample out;
  if (neg.size() == pos.size()) {
    out.indices.resize(labels.size());
    std::iota(out.indices.begin(), out.indices.end(), std::size_t{0});
    return out;
  }
  auto& majority = neg.size() > pos.size() ? neg : pos;
  auto& minority = neg.size() > pos.size() ? pos : neg;
  // Partial Fisher-Yates: the first minority.size() slots become the draw.
  for (std::size_t i = 0; i < minority.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(majority.size() - i));
    std::swap(majority[i], majority[j]);
  }
  out.indices.assign(minority.begin(), minority.end());
  out.indices.insert(out.indices.end(), majority.begin(),
                     majority.begin() + static_cast<std::ptrdiff_t>(minority.size()));
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

IndexSample bootstrap(std::size_t n, Rng& rng) {
  if (n == 0) throw EmptyInput("bootstrap: n must be positive");
  IndexSample out;
  out.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.indices[i] = static_cast<std::size_t>(rng.below(n));
  }
  return out;
}

std::vector<std::size_t> weighted_sample_without_replacement(
    std::span<const std::size_t> pool, std::span<const double> weights, std::size_t count,
    Rng& rng) {
  if (count > pool.size()) {
    throw InvalidArgument("weighted_sample_without_replacement: count exceeds pool");
  }
  if (pool.size() != weights.size()) {
    throw LengthMismatch("weighted_sample_without_replacement: pool/weights sizes differ");
  }
  double total = 0.0;
  for (const double w : weights) {
    if (w < 0.0) throw NegativeWeight("weighted_sample_without_replacement");
    total += w;
  }
  std::vector<std::size_t> items(pool.begin(), pool.end());
  std::vector<double> wts(weights.begin(), weights.end());
  if (total <= 0.0) {
    std::fill(wts.begin(), wts.end(), 1.0);
    total = static_cast<double>(wts.size());
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  std::size_t live = items.size();
  for (std::size_t k = 0; k < count; ++k) {
    const double target = rng.unit() * total;
    double acc = 0.0;
    std::size_t picked = live - 1;
    for (std::size_t i = 0; i < live; ++i) {
      acc += wts[i];
      if (target < acc) {
        picked = i;
        break;
      }
    }
    out.push_back(items[picked]);
    total -= wts[picked];
    --live;
    items[picked] = items[live];
    wts[picked] = wts[live];
    // Accumulated subtraction drifts; recompute when the remainder is tiny.
    if (total < 1e-12 && live > 0) {
      total = std::accumulate(wts.begin(), wts.begin() + static_cast<std::ptrdiff_t>(live), 0.0);
      if (total <= 0.0) {
        std::fill(wts.begin(), wts.begin() + static_cast<std::ptrdiff_t>(live), 1.0);
        total = static_cast<double>(live);
      }
    }
  }
  return out;
}

std::vector<std::size_t> balanced_resample(std::span<const int> labels,
                                           std::span<const double> weights, Rng& rng) {
  if (labels.empty()) throw EmptyInput("balanced_resample: no labels");
  if (labels.size() != weights.size()) {
    throw LengthMismatch("balanced_resample: labels/weights sizes differ");
  }
  std::vector<std::size_t> neg;
  std::vector<std::size_t> pos;
  split_by_class(labels, neg, pos);
  if (neg.empty() || pos.empty()) {
    throw SingleClassDataset("balanced_resample: both classes required");
  }
  const std::size_t target = std::min(neg.size(), pos.size());
  std::vector<std::size_t> out;
  out.reserve(2 * target);
  for (const auto* cls : {&neg, &pos}) {
    if (cls->size() == target) {
      out.insert(out.end(), cls->begin(), cls->end());
      continue;
    }
    std::vector<double> w(cls->size());
    for (std::size_t i = 0; i < cls->size(); ++i) w[i] = weights[(*cls)[i]];
    const auto drawn = weighted_sample_without_replacement(*cls, w, target, rng);
    out.insert(out.end(), drawn.begin(), drawn.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  if (fold >= folds) throw IndexOutOfRange("fold " + std::to_string(fold));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  if (fold >= folds) throw IndexOutOfRange("fold " + std::to_string(fold));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_kfold(std::span<const int> labels, std::size_t folds, Rng& rng) {
  if (folds < 2) throw InvalidArgument("stratified_kfold: folds must be at least 2");
  if (labels.empty()) throw EmptyInput("stratified_kfold: no labels");
  std::vector<std::size_t> neg;
  std::vector<std::size_t> pos;
  split_by_class(labels, neg, pos);
  FoldPlan plan;
  plan.folds = folds;
  plan.assignment.assign(labels.size(), 0);
  for (auto* cls : {&neg, &pos}) {
    if (cls->size() < folds) {
      throw TooFewClassMembers("stratified_kfold: class smaller than fold count");
    }
    rng.shuffle(std::span<std::size_t>(*cls));
    for (std::size_t j = 0; j < cls->size(); ++j) {
      plan.assignment[(*cls)[j]] = j % folds;
    }
  }
  return plan;
}

}  // namespace balens
