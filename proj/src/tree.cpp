#include "balens/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "balens/errors.hpp"

namespace balens {

namespace {

double gini(double wp, double wn) {
  const double w = wp + wn;
  if (w <= 0.0) return 0.0;
  const double pp = wp / w;
  const double pn = wn / w;
  return 1.0 - pp * pp - pn * pn;
}

struct Builder {
  const EncodedMatrix& X;
  std::span<const int> y;
  std::span<const double> w;
  const TreeParams& params;
  Rng& rng;
  double root_weight = 0.0;
  std::vector<double> raw_importance;
  std::vector<std::size_t> feature_scratch;
  std::vector<std::pair<double, std::size_t>> sort_scratch;  // (value, position in occ)

  std::unique_ptr<TreeNode> build(std::vector<std::size_t>& occ, std::size_t depth) {
    auto node = std::make_unique<TreeNode>();
    double wp = 0.0;
    double wn = 0.0;
    for (const std::size_t i : occ) {
      (y[i] ? wp : wn) += w[i];
    }
    node->weight_pos = wp;
    node->weight_neg = wn;

    const bool depth_capped = params.max_depth > 0 && depth >= params.max_depth;
    if (occ.size() < params.min_split || wp == 0.0 || wn == 0.0 || depth_capped) {
      return node;
    }

    const std::size_t p = X.cols;
    std::size_t n_candidates = params.features_per_split;
    if (n_candidates == 0 || n_candidates > p) n_candidates = p;
    feature_scratch.resize(p);
    std::iota(feature_scratch.begin(), feature_scratch.end(), std::size_t{0});
    if (n_candidates < p) {
      for (std::size_t i = 0; i < n_candidates; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(p - i));
        std::swap(feature_scratch[i], feature_scratch[j]);
      }
      // Ascending order keeps the lowest-feature tie-break deterministic.
      std::sort(feature_scratch.begin(), feature_scratch.begin() + static_cast<std::ptrdiff_t>(n_candidates));
    }

    double best_proxy = -std::numeric_limits<double>::infinity();
    std::int32_t best_feature = -1;
    double best_threshold = 0.0;
    double best_lwp = 0.0;
    double best_lwn = 0.0;

    const std::size_t n = occ.size();
    for (std::size_t fi = 0; fi < n_candidates; ++fi) {
      const std::size_t f = feature_scratch[fi];
      sort_scratch.clear();
      sort_scratch.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        sort_scratch.emplace_back(X.values[occ[k] * X.cols + f], k);
      }
      std::sort(sort_scratch.begin(), sort_scratch.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double lwp = 0.0;
      double lwn = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t i = occ[sort_scratch[k].second];
        (y[i] ? lwp : lwn) += w[i];
        if (sort_scratch[k + 1].first <= sort_scratch[k].first) continue;
        if (k + 1 < params.min_leaf || n - k - 1 < params.min_leaf) continue;
        const double lw = lwp + lwn;
        const double rwp = wp - lwp;
        const double rwn = wn - lwn;
        const double rw = rwp + rwn;
        if (lw <= 0.0 || rw <= 0.0) continue;
        const double proxy = (lwp * lwp + lwn * lwn) / lw + (rwp * rwp + rwn * rwn) / rw;
        if (proxy > best_proxy) {
          best_proxy = proxy;
          best_feature = static_cast<std::int32_t>(f);
          best_threshold = (sort_scratch[k].first + sort_scratch[k + 1].first) / 2.0;
          best_lwp = lwp;
          best_lwn = lwn;
        }
      }
    }

    if (best_feature < 0) return node;

    const double W = wp + wn;
    const double lw = best_lwp + best_lwn;
    const double rw = W - lw;
    const double child_impurity =
        (lw * gini(best_lwp, best_lwn) + rw * gini(wp - best_lwp, wn - best_lwn)) / W;
    raw_importance[static_cast<std::size_t>(best_feature)] +=
        (W / root_weight) * (gini(wp, wn) - child_impurity);

    std::vector<std::size_t> left_occ;
    std::vector<std::size_t> right_occ;
    for (const std::size_t i : occ) {
      const double v = X.values[i * X.cols + static_cast<std::size_t>(best_feature)];
      (v < best_threshold ? left_occ : right_occ).push_back(i);
    }
    occ.clear();
    occ.shrink_to_fit();

    node->feature = best_feature;
    node->threshold = best_threshold;
    node->left = build(left_occ, depth + 1);
    node->right = build(right_occ, depth + 1);
    return node;
  }
};

std::size_t node_depth(const TreeNode& node) {
  if (node.is_leaf()) return 0;
  return 1 + std::max(node_depth(*node.left), node_depth(*node.right));
}

std::size_t count_nodes(const TreeNode& node) {
  if (node.is_leaf()) return 1;
  return 1 + count_nodes(*node.left) + count_nodes(*node.right);
}

}  // namespace

std::size_t TreeModel::depth() const { return root ? node_depth(*root) : 0; }

std::size_t TreeModel::node_count() const { return root ? count_nodes(*root) : 0; }

TreeModel fit_tree(const EncodedMatrix& X, std::span<const int> y,
                   std::span<const double> sample_weights, const TreeParams& params, Rng& rng) {
  if (X.rows == 0) throw EmptyInput("fit_tree: no rows");
  if (y.size() != X.rows || sample_weights.size() != X.rows) {
    throw LengthMismatch("fit_tree: rows, labels and weights must agree");
  }
  double total = 0.0;
  for (const double v : sample_weights) {
    if (v < 0.0) throw NegativeWeight("fit_tree");
    total += v;
  }
  if (total <= 0.0) throw InvalidArgument("fit_tree: total weight must be positive");
  for (const int label : y) {
    if (label != 0 && label != 1) throw InvalidArgument("fit_tree: labels must be 0 or 1");
  }

  Builder builder{X, y, sample_weights, params, rng};
  builder.root_weight = total;
  builder.raw_importance.assign(X.cols, 0.0);

  std::vector<std::size_t> occ(X.rows);
  std::iota(occ.begin(), occ.end(), std::size_t{0});

  TreeModel model;
  model.params = params;
  model.root = builder.build(occ, 0);
  model.importances = std::move(builder.raw_importance);
  const double sum = std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
  if (sum > 0.0) {
    for (double& v : model.importances) v /= sum;
  }
  return model;
}

TreeModel fit_tree(const EncodedMatrix& X, std::span<const int> y, const TreeParams& params,
                   Rng& rng) {
  const std::vector<double> uniform(X.rows, 1.0);
  return fit_tree(X, y, uniform, params, rng);
}

double predict_tree(const TreeModel& model, std::span<const double> x) {
  if (x.size() != model.columns()) {
    throw DimensionMismatch("predict_tree: row has " + std::to_string(x.size()) +
                            " columns, model expects " + std::to_string(model.columns()));
  }
  const TreeNode* node = model.root.get();
  while (!node->is_leaf()) {
    node = x[static_cast<std::size_t>(node->feature)] < node->threshold ? node->left.get()
                                                                        : node->right.get();
  }
  const double w = node->weight_pos + node->weight_neg;
  if (w <= 0.0) return 0.5;
  return node->weight_pos / w;
}

const std::vector<double>& tree_importances(const TreeModel& model) { return model.importances; }

}  // namespace balens
